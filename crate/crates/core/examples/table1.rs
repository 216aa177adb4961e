//! Recomputes the η ≡ 1 bounds table and flags any cell that drifts from the
//! reference values given to four decimals.

use frog_biregular::bounds::{round4, table1, table1_mismatches, ub_closed, DEFAULT_TOL, TABLE1_TOL};
use frog_biregular::TreeParams;

fn main() -> frog_biregular::Result<()> {
    let rows = table1(DEFAULT_TOL)?;
    println!("{:>3} {:>6}  {:>8} {:>8} {:>8} {:>8}", "d1", "d2", "alves", "lb", "ub", "closed");
    for r in &rows {
        let closed = ub_closed(TreeParams::new(r.d1, r.d2)?)?;
        println!(
            "{:>3} {:>6}  {:>8.4} {:>8.4} {:>8.4} {:>8.4}",
            r.d1,
            r.d2,
            round4(r.lb_alves),
            round4(r.lb_biregular),
            round4(r.ub_root),
            round4(closed)
        );
    }
    let bad = table1_mismatches(&rows, TABLE1_TOL);
    println!("{} mismatching cells at tolerance {TABLE1_TOL}", bad.len());
    Ok(())
}
