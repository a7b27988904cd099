// The verification suite at the smoke-test sizes.

use fracstoch::verify::{run_all, VerifyConfig};

pub fn run_example() -> fracstoch::Result<()> {
    let results = run_all(&VerifyConfig::fast(1));
    for r in &results {
        println!("{}", r.summary());
    }
    let passed = results.iter().filter(|r| r.passed()).count();
    println!("{passed}/{} criteria passed", results.len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> fracstoch::Result<()> {
    run_example()
}
