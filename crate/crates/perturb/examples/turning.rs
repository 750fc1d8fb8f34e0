//! Turning-point resolution for the Weber system.

use perturb::cli::parse_system;
use perturb::linalg::Orders;
use perturb::reduce::resolve_turning_point;

fn main() -> Result<(), perturb::error::Error> {
    let sys = parse_system(include_str!("../data/weber.txt"))?;
    let res = resolve_turning_point(&sys, &Orders::default())?;
    println!("q = {}", res.q);
    for i in 0..res.t.rows() {
        let row: Vec<String> = (0..res.t.cols()).map(|j| res.t.get(i, j).to_string()).collect();
        println!("T[{i}] = [{}]", row.join(", "));
    }
    println!("{}", res.sys);
    Ok(())
}
