//! Runs one verification suite and prints the report as JSON.

use unitary_flips::serial::to_json;
use unitary_flips::verify::{run_suite, Config, Suite};

fn main() {
    let mut cfg = Config::new(2, 3);
    cfg.seed = 42;
    let report = run_suite(Suite::Groups, &cfg);
    print!("{}", to_json(&report));
}
