//! Exponential parts of the introductory turning-point system.

use perturb::cli::parse_system;
use perturb::driver::{formal_reduce, Config};

fn main() -> Result<(), perturb::error::Error> {
    let sys = parse_system(include_str!("../data/intro.txt"))?;
    let red = formal_reduce(&sys, &Config::default())?;
    for b in &red.exp.branches {
        println!("Q = {}", b.text());
    }
    print!("{}", red.trace.text());
    Ok(())
}
