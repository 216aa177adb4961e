//! Path-open probabilities ν from the recursion, against the edge-open
//! probability π and a direct simulation of the frogs along the path.

use frog_biregular::hitting::edge_open_prob;
use frog_biregular::pathprob::{mc_path_open, PathOpenQuery, PathOpenTable};
use frog_biregular::{InitLaw, Survival, TreeParams, VertexType};

fn main() -> frog_biregular::Result<()> {
    let t = TreeParams::new(2, 3)?;
    let law: InitLaw = "poisson:1".parse()?;
    let p = Survival::new(0.8)?;
    let mut table = PathOpenTable::for_tree(t, law, p);
    println!("{:>2}  {:>9}  {:>9}  {:>9}", "k", "pi", "nu", "mc");
    for k in 1..=6 {
        let q = PathOpenQuery::new(VertexType::One, VertexType::One.after(k), k)?;
        let nu = table.value(q)?;
        let pi = edge_open_prob(t, &law, p, q.from, q.to, k)?;
        let mc = mc_path_open(t, law, p, q, 50_000, u64::from(k));
        println!("{k:>2}  {pi:>9.6}  {nu:>9.6}  {:>9.6}", mc.estimate);
    }
    Ok(())
}
