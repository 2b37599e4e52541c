//! Every acceptance criterion at full sample counts, one line per criterion.

use logmink::selftest::{Scale, Suite};

fn main() {
    let mut suite = Suite::new(Scale::Full, 2024);
    let outcomes = suite.run_all();
    for o in &outcomes {
        println!("{}", o.line());
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        outcomes.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
