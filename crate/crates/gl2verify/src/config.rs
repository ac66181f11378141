//! Suite configuration: primes, route mode, check selection, output format.

use serde::Serialize;

/// Which verification route(s) to drive.
///
/// The matrix route works with exact big-integer operator matrices and
/// needs the group enumerated; the character-sum route evaluates
/// eigenvalues from closed-form sums and scales further. `Both` runs the
/// two and cross-checks everywhere they overlap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Matrix,
    Charsum,
    Both,
}

impl Mode {
    pub fn uses_matrix(self) -> bool {
        matches!(self, Mode::Matrix | Mode::Both)
    }

    pub fn uses_charsum(self) -> bool {
        matches!(self, Mode::Charsum | Mode::Both)
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Matrix => "matrix",
            Mode::Charsum => "charsum",
            Mode::Both => "both",
        }
    }
}

/// The eight named verifications, listed in dependency order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    /// Subgroup orders, shapes, index-2 decompositions, class partition.
    Structure,
    /// Double-coset partitions, degrees, sigma labeling, column sums.
    Dcosets,
    /// Character table: orthogonality, dimensions, parity conditions.
    Characters,
    /// Permutation-character decompositions of the eight coset modules.
    Decompose,
    /// Composite operator identities (exact matrix equalities).
    Relations,
    /// Sequence compositions, ranks, and position-wise eigenvalue hypotheses.
    Exactness,
    /// Pairing-operator eigenvalues bounded away from zero, both routes.
    Nonvanishing,
    /// Determinant table of the pairing operator, both routes.
    Table2,
}

/// Canonical execution order (dependencies run first).
pub const CHECK_ORDER: [CheckKind; 8] = [
    CheckKind::Structure,
    CheckKind::Dcosets,
    CheckKind::Characters,
    CheckKind::Decompose,
    CheckKind::Relations,
    CheckKind::Exactness,
    CheckKind::Nonvanishing,
    CheckKind::Table2,
];

impl CheckKind {
    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Structure => "structure",
            CheckKind::Dcosets => "dcosets",
            CheckKind::Characters => "characters",
            CheckKind::Decompose => "decompose",
            CheckKind::Relations => "relations",
            CheckKind::Exactness => "exactness",
            CheckKind::Nonvanishing => "nonvanishing",
            CheckKind::Table2 => "table2",
        }
    }
}

/// Output format for the emitted report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

/// Primes verified by default: the supported table range.
pub const DEFAULT_PRIMES: [u64; 7] = [3, 5, 7, 11, 13, 17, 19];

/// Largest prime accepted without `--allow-large`.
pub const GUARDED_MAX_PRIME: u64 = 19;

/// Largest prime accepted even with `--allow-large`: beyond this the
/// element-indexed tables (p^4 entries) stop being reasonable.
pub const HARD_MAX_PRIME: u64 = 61;

/// A fully validated suite request.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    /// Nonempty, strictly increasing odd primes.
    pub primes: Vec<u64>,
    pub mode: Mode,
    /// Nonempty, deduplicated, in dependency order.
    pub checks: Vec<CheckKind>,
    pub allow_large: bool,
}

/// A configuration problem that must abort with a usage error.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// All odd primes up to `max` inclusive.
pub fn odd_primes_up_to(max: u64) -> Vec<u64> {
    (3..=max).filter(|&p| is_odd_prime(p)).collect()
}

impl SuiteConfig {
    /// Validates and normalizes a raw request.
    pub fn new(
        primes: Vec<u64>,
        mode: Mode,
        checks: Vec<CheckKind>,
        allow_large: bool,
    ) -> Result<SuiteConfig, ConfigError> {
        if primes.is_empty() {
            return Err(ConfigError("no primes requested".into()));
        }
        let mut primes = primes;
        primes.sort_unstable();
        primes.dedup();
        for &p in &primes {
            if !is_odd_prime(p) {
                return Err(ConfigError(format!("{p} is not an odd prime")));
            }
            if !allow_large && p > GUARDED_MAX_PRIME {
                return Err(ConfigError(format!(
                    "p = {p} exceeds the default guard (p <= {GUARDED_MAX_PRIME}); pass --allow-large to lift it"
                )));
            }
            if p > HARD_MAX_PRIME {
                return Err(ConfigError(format!(
                    "p = {p} exceeds the hard resource cap (p <= {HARD_MAX_PRIME}): element tables grow as p^4"
                )));
            }
        }
        let checks: Vec<CheckKind> =
            CHECK_ORDER.iter().copied().filter(|c| checks.contains(c)).collect();
        if checks.is_empty() {
            return Err(ConfigError("no checks requested".into()));
        }
        Ok(SuiteConfig { primes, mode, checks, allow_large })
    }
}
