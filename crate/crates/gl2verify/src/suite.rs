//! Drives the checks over a set of primes and assembles the suite report.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use gl2cosets::Error;

use crate::checks::{run_check, Artifacts};
use crate::config::SuiteConfig;
use crate::report::{PrimeReport, Status, SuiteReport};
use crate::session::Session;

/// Environment variable naming the worker-thread count for multi-prime runs.
pub const THREADS_ENV: &str = "GL2VERIFY_THREADS";

fn thread_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or(1)
}

fn run_prime(p: u64, config: &SuiteConfig) -> Result<PrimeReport, Error> {
    let start = Instant::now();
    let session = Session::build(p, config.mode)?;
    let mut artifacts = Artifacts::default();
    let checks: Vec<_> =
        config.checks.iter().map(|&kind| run_check(&session, kind, &mut artifacts)).collect();
    let pass = checks.iter().all(|c| c.status != Status::Fail);
    Ok(PrimeReport {
        p,
        pass,
        checks,
        table: artifacts.table,
        components: artifacts.components,
        decompositions: artifacts.decompositions,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// Run the configured checks for every configured prime.
///
/// Primes are processed in increasing order; when `GL2VERIFY_THREADS` is set
/// to more than 1 they are distributed over that many workers, and the report
/// is assembled in prime order regardless, so output is deterministic.
pub fn run(config: &SuiteConfig) -> Result<SuiteReport, Error> {
    let workers = thread_count().min(config.primes.len());
    let slots: Vec<Mutex<Option<Result<PrimeReport, Error>>>> =
        config.primes.iter().map(|_| Mutex::new(None)).collect();

    if workers <= 1 {
        for (slot, &p) in slots.iter().zip(&config.primes) {
            *slot.lock().expect("result slot") = Some(run_prime(p, config));
        }
    } else {
        let next = AtomicUsize::new(0);
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    if i >= config.primes.len() {
                        break;
                    }
                    let result = run_prime(config.primes[i], config);
                    *slots[i].lock().expect("result slot") = Some(result);
                });
            }
        });
    }

    let mut prime_reports = Vec::with_capacity(slots.len());
    for slot in slots {
        let report = slot.into_inner().expect("result slot").expect("every prime processed")?;
        prime_reports.push(report);
    }
    Ok(SuiteReport::assemble(config.mode, config.checks.clone(), prime_reports))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{CheckKind, Mode, CHECK_ORDER};

    #[test]
    fn small_prime_full_run_passes() {
        let config = SuiteConfig::new(vec![3], Mode::Both, CHECK_ORDER.to_vec(), false).unwrap();
        let report = run(&config).unwrap();
        assert!(report.pass, "p = 3 suite failed:\n{}", report.to_text());
        assert_eq!(report.primes.len(), 1);
        assert_eq!(report.primes[0].checks.len(), 8);
        let table = report.primes[0].table.as_ref().unwrap();
        assert_eq!(table.det_total, "8");
        assert_eq!(table.det_total_factored, "2^3");
        assert_eq!(table.matrix_det.as_deref(), Some("8"));
    }

    #[test]
    fn charsum_mode_skips_enumeration_checks() {
        let config = SuiteConfig::new(
            vec![5],
            Mode::Charsum,
            vec![CheckKind::Structure, CheckKind::Nonvanishing, CheckKind::Table2],
            false,
        )
        .unwrap();
        let report = run(&config).unwrap();
        assert!(report.pass, "charsum p = 5 failed:\n{}", report.to_text());
        let checks = &report.primes[0].checks;
        assert_eq!(checks[0].status, Status::Skip);
        assert_eq!(checks[1].status, Status::Pass);
        assert_eq!(checks[2].status, Status::Pass);
        let table = report.primes[0].table.as_ref().unwrap();
        assert!(table.matrix_det.is_none());
        assert_eq!(table.det_total, "6144");
        // CSV keeps one row per (prime, check), skips included.
        let csv = report.to_csv();
        assert_eq!(csv.lines().count(), 1 + 3);
    }

    #[test]
    fn threaded_run_matches_serial_run() {
        let config = SuiteConfig::new(
            vec![3, 5],
            Mode::Charsum,
            vec![CheckKind::Characters, CheckKind::Table2],
            false,
        )
        .unwrap();
        let serial = run(&config).unwrap().to_json();
        std::env::set_var(THREADS_ENV, "2");
        let threaded = run(&config).unwrap().to_json();
        std::env::remove_var(THREADS_ENV);
        assert_eq!(serial, threaded);
    }
}
