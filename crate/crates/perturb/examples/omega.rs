//! Exponential order of a seven-dimensional system and the effect of two
//! ramification indices.

use perturb::cli::parse_system;
use perturb::linalg::Orders;
use perturb::reduce::{exp_order_system, katz_ramify, katz_ramify_degree};

fn main() -> Result<(), perturb::error::Error> {
    let sys = parse_system(include_str!("../data/seven.txt"))?;
    let ord = Orders::default();
    let res = exp_order_system(&sys, &ord)?;
    println!("omega = {}, edge polynomial {}", res.omega, res.edge_text());
    println!("smallest admissible index: {}", katz_ramify_degree(&sys, &ord)?);
    for k in [3, 7] {
        let (_, red) = katz_ramify(&sys, &ord, Some(k))?;
        println!("eps = eps~^{k}: h = {}, rank = {:?}", red.exit_rep.h, red.final_rank());
    }
    Ok(())
}
