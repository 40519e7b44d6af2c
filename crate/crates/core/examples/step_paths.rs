//! Building, evaluating and serialising step paths.

use cadlag::{Result, StepPath};

fn main() -> Result<()> {
    // two-dimensional path on [0, 3]
    let p = StepPath::new(3.0, vec![0.0, 1.0], vec![(0.5, vec![1.0, 1.0]), (2.0, vec![-0.5, 2.0])])?;
    for t in [0.0, 0.5, 1.9, 2.0, 3.0] {
        println!("p({t}) = {:?}", p.eval(t)?);
    }
    println!("p(2-) = {:?}", p.left_limit(2.0)?);
    println!("jump at 2 = {:?}", p.jump_at(2.0)?);
    println!("total variation = {}", p.total_variation(3.0));
    println!("running sup = {}", p.running_sup(3.0));

    let q = StepPath::scalar_increments(3.0, 0.0, &[(1.0, 0.25), (1.5, -1.0)])?;
    let first = p.coordinate(0)?;
    println!("first coordinate + q:\n{}", first.add(&q)?.to_csv());

    let back = StepPath::from_csv(&p.to_csv())?;
    assert_eq!(back, p);
    println!("completed graph vertices of q: {:?}", q.completed_graph().vertices());
    Ok(())
}
