// Driving the command line interface in-process.

use fracstoch::cli::run_with;

pub fn run_example() -> fracstoch::Result<()> {
    let commands: [&[&str]; 3] = [
        &["eval-ml", "--alpha", "0.5", "--eta", "1", "--xi", "1", "--x", "-1,-5"],
        &["invert", "--transform", "H_XS", "--gamma", "0.5", "--nu", "0.2", "--delta", "1", "--first", "1", "--t", "1,2"],
        &["sample-inverse", "--gamma", "0.4", "--nu", "0.3", "--delta", "1", "--t", "1", "--n", "3", "--seed", "1"],
    ];
    for args in commands {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(std::iter::once("fracstoch").chain(args.iter().copied()), &mut out, &mut err);
        println!("$ fracstoch {}  (exit {code})", args.join(" "));
        print!("{}", String::from_utf8_lossy(&out));
        eprint!("{}", String::from_utf8_lossy(&err));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> fracstoch::Result<()> {
    run_example()
}
