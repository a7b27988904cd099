//! End-to-end acceptance run: every criterion of the verification suite at
//! the full sample sizes, one PASS/FAIL line each.

use fracstoch::verify::{run_criterion, VerifyConfig, CRITERIA};

const SEED: u64 = 20_251_016;

fn main() {
    let cfg = VerifyConfig::full(SEED);
    println!("acceptance suite, seed {SEED}");
    let mut failed = 0;
    for id in 1..=CRITERIA.len() {
        let r = run_criterion(id, &cfg);
        println!("{}", r.summary());
        for c in r.checks.iter().filter(|c| !c.passed) {
            println!("    {}: value {:e}, reference {:e}, metric {:e}, tolerance {:e}", c.label, c.value, c.reference, c.metric, c.tolerance);
        }
        if !r.passed() {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
