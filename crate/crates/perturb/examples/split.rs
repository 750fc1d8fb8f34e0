//! Block diagonalisation of a system with two distinct leading eigenvalues.

use perturb::cli::parse_system;
use perturb::linalg::Orders;
use perturb::reduce::split;

fn main() -> Result<(), perturb::error::Error> {
    let sys = parse_system(include_str!("../data/two_eigen.txt"))?;
    let res = split(&sys, &Orders::with_order(4))?;
    for (sub, ev) in res.subsystems.iter().zip(&res.eigenvalues) {
        println!("eigenvalue {ev}:\n{sub}");
    }
    Ok(())
}
