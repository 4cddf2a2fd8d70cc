use dr54_charges::*;
use dr54_charges::tower::*;
use dr54_core::field::QQ;
use dr54_core::Rat;
use dr54_model::{periodic_propagator, ExactWeights};
use std::time::Instant;

fn main() {
    let w = ExactWeights::new(Rat::new(1, 7), Rat::new(1, 2), Rat::new(1, 8), Rat::new(3, 11));
    let t0 = Instant::now();
    let prop = periodic_propagator(&QQ, &w, 8).unwrap();
    let u = prop.full.materialize(&QQ);
    eprintln!("U built: nnz = {} ({:?})", u.nnz(), t0.elapsed());

    let t0 = Instant::now();
    let basis = find_commutant(
        &u, 8,
        &CommutantQuery { range: 6, shift_period: 2, left_aligned: true },
    ).unwrap();
    eprintln!("range-6 commutant dim = {} ({:?})", basis.len(), t0.elapsed());
    let (diag, nondiag) = split_diagonal(&basis);
    eprintln!("diagonal: {}, non-diagonal: {}", diag.len(), nondiag.len());
    for (k, d) in basis.iter().enumerate() {
        eprintln!("  basis[{k}]: nnz = {}, diag = {}", d.op.nnz(),
            d.op.rows.iter().enumerate().all(|(r, row)| row.iter().all(|(c, _)| *c as usize == r)));
    }
}
