use std::process::ExitCode;
use std::time::Instant;

use schwartzkit_cli::criteria;

fn check(k: usize) -> bool {
    let start = Instant::now();
    let metrics = criteria::run(k, 0);
    let pass = !metrics.is_empty() && metrics.iter().all(|m| m.pass);
    let detail: Vec<String> = metrics
        .iter()
        .map(|m| format!("{}={:.3e}/{:.0e}", m.name, m.value, m.tolerance))
        .collect();
    println!(
        "criterion {k:>2} ({}): {} [{}] {:.2}s",
        criteria::title(k),
        if pass { "PASS" } else { "FAIL" },
        detail.join(", "),
        start.elapsed().as_secs_f64()
    );
    pass
}

fn main() -> ExitCode {
    let failed: Vec<usize> = (1..=criteria::COUNT).filter(|&k| !check(k)).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", criteria::COUNT);
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
