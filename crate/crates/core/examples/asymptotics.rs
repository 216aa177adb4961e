//! Both bounds on T(d, d) approach 1/2 like c/d, with c = 1/4 below and 1/2
//! above.

use frog_biregular::bounds::asymptotic_check;

fn main() -> frog_biregular::Result<()> {
    println!("{:>7}  {:>10}  {:>10}", "d", "(lb-1/2)d", "(ub-1/2)d");
    for row in asymptotic_check(&[2, 5, 10, 100, 1000, 10_000, 100_000])? {
        println!("{:>7}  {:>10.6}  {:>10.6}", row.d, row.lb_scaled, row.ub_scaled);
    }
    Ok(())
}
