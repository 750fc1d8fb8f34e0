//! Eps-polygon and invariants of two scalar equations.

use perturb::cli::parse_scalar;

fn main() -> Result<(), perturb::error::Error> {
    let third = parse_scalar(include_str!("../data/third_order.txt"))?;
    for e in third.eps_polygon() {
        println!("slope {}: E = {}", e.slope, e.poly_text());
    }
    println!("omega = {}", third.exp_order());

    let fifth = parse_scalar(include_str!("../data/fifth_order.txt"))?;
    let inv = fifth.invariants()?;
    println!("kappa = {}, nu = {}, mu = {}, gamma = {:?}", inv.kappa, inv.nu, inv.mu, inv.gamma);
    let (sys, _) = fifth.to_irreducible_system()?;
    println!("irreducible system: h = {}, sigma = {}, p = {}", sys.rep.h, sys.rep.sigma, sys.rep.p);
    Ok(())
}
