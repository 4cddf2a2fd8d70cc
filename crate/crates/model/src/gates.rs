//! Local gate matrices. Probability vectors evolve by left multiplication
//! p(t+1) = U p(t), so stochasticity means unit column sums.

use crate::weights::FaceWeights;
use dr54_core::field::Field;
use dr54_core::op::SpMat;

/// The 8x8 three-site gate: diagonal in the outer (control) qubits, the
/// middle qubit updated by f_{kl}. Basis |k, i, l> with the leftmost site
/// most significant, so the matrix element at (k i l, k j l) is f_{kl}[i][j].
pub fn face_gate<F: Field>(ctx: &F, w: &FaceWeights<F::El>) -> SpMat<F::El> {
    let one = ctx.one();
    let zero = ctx.zero();
    let f00 = [[w.alpha.clone(), w.beta.clone()], [w.gamma.clone(), w.delta.clone()]];
    let x = [[zero.clone(), one.clone()], [one.clone(), zero.clone()]];
    let mut triplets = Vec::with_capacity(16);
    for k in 0..2usize {
        for l in 0..2usize {
            let f = if k == 0 && l == 0 { &f00 } else { &x };
            for i in 0..2usize {
                for j in 0..2usize {
                    let v = f[i][j].clone();
                    if !ctx.is_zero(&v) {
                        triplets.push((k * 4 + i * 2 + l, k * 4 + j * 2 + l, v));
                    }
                }
            }
        }
    }
    SpMat::from_triplets(ctx, 8, 8, triplets)
}

/// Left conditional-driving bath on sites (1, 2): the new state of site 1
/// depends only on site 2. Basis order |s1 s2> = 00, 01, 10, 11.
pub fn left_boundary_gate<F: Field>(ctx: &F, a: &F::El, b: &F::El) -> SpMat<F::El> {
    let one = ctx.one();
    let abar = ctx.sub(&one, a);
    let bbar = ctx.sub(&one, b);
    let rows = [
        [a.clone(), ctx.zero(), a.clone(), ctx.zero()],
        [ctx.zero(), b.clone(), ctx.zero(), b.clone()],
        [abar.clone(), ctx.zero(), abar, ctx.zero()],
        [ctx.zero(), bbar.clone(), ctx.zero(), bbar],
    ];
    from_dense4(ctx, rows)
}

/// Right conditional-driving bath on sites (N-1, N): the new state of
/// site N depends only on site N-1.
pub fn right_boundary_gate<F: Field>(ctx: &F, c: &F::El, d: &F::El) -> SpMat<F::El> {
    let one = ctx.one();
    let cbar = ctx.sub(&one, c);
    let dbar = ctx.sub(&one, d);
    let rows = [
        [c.clone(), c.clone(), ctx.zero(), ctx.zero()],
        [cbar.clone(), cbar, ctx.zero(), ctx.zero()],
        [ctx.zero(), ctx.zero(), d.clone(), d.clone()],
        [ctx.zero(), ctx.zero(), dbar.clone(), dbar],
    ];
    from_dense4(ctx, rows)
}

fn from_dense4<F: Field>(ctx: &F, rows: [[F::El; 4]; 4]) -> SpMat<F::El> {
    let mut triplets = Vec::new();
    for (r, row) in rows.into_iter().enumerate() {
        for (c, v) in row.into_iter().enumerate() {
            if !ctx.is_zero(&v) {
                triplets.push((r, c, v));
            }
        }
    }
    SpMat::from_triplets(ctx, 4, 4, triplets)
}

/// Two-site hopping gate of the comparison model:
/// U(r) = 1/(1+r) * 1 + r/(1+r) * SWAP, stochastic for r >= 0.
pub fn hop_gate<F: Field>(ctx: &F, r: &F::El) -> SpMat<F::El> {
    let one = ctx.one();
    let denom_inv = ctx.inv(&ctx.add(&one, r)).expect("1 + r must be nonzero");
    let stay = denom_inv.clone();
    let swap = ctx.mul(r, &denom_inv);
    let mut triplets = vec![(0usize, 0usize, one.clone()), (3, 3, one)];
    // On the swap-invariant states the gate is the identity.
    for (i, j) in [(1usize, 1usize), (2, 2)] {
        triplets.push((i, j, stay.clone()));
    }
    for (i, j) in [(1usize, 2usize), (2, 1)] {
        triplets.push((i, j, swap.clone()));
    }
    SpMat::from_triplets(ctx, 4, 4, triplets)
}

/// Single-site boundary gate [[1-a, b], [a, 1-b]] of the comparison model.
pub fn site_boundary_gate<F: Field>(ctx: &F, a: &F::El, b: &F::El) -> SpMat<F::El> {
    let one = ctx.one();
    let rows = [
        [ctx.sub(&one, a), b.clone()],
        [a.clone(), ctx.sub(&one, b)],
    ];
    let mut triplets = Vec::new();
    for (r, row) in rows.into_iter().enumerate() {
        for (c, v) in row.into_iter().enumerate() {
            if !ctx.is_zero(&v) {
                triplets.push((r, c, v));
            }
        }
    }
    SpMat::from_triplets(ctx, 2, 2, triplets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::ExactWeights;
    use dr54_core::field::QQ;
    use dr54_core::Rat;

    fn column_sums(m: &SpMat<Rat>) -> Vec<Rat> {
        let mut sums = vec![Rat::zero(); m.ncols];
        for row in &m.rows {
            for (c, v) in row {
                sums[*c as usize] += v;
            }
        }
        sums
    }

    #[test]
    fn undeformed_gate_flips_middle_when_neighbor_occupied() {
        let g = face_gate(&QQ, &ExactWeights::undeformed().map(|r| r.clone()));
        // |001> (index 1) -> |011> (index 3)
        assert_eq!(g.get(&QQ, 3, 1), Rat::one());
        assert_eq!(g.get(&QQ, 1, 1), Rat::zero());
        // gate is diagonal in first and third qubits: every entry stays
        // within its (k, l) block
        for (r, row) in g.rows.iter().enumerate() {
            for (c, _) in row {
                assert_eq!(r & 0b101, (*c as usize) & 0b101);
            }
        }
    }

    #[test]
    fn deformed_gate_row_structure() {
        let w = ExactWeights::new(Rat::new(1, 7), Rat::new(1, 2), Rat::new(1, 8), Rat::new(3, 11));
        let g = face_gate(&QQ, &w);
        // row |000>: alpha at |000>, beta at |010>
        assert_eq!(g.get(&QQ, 0, 0), Rat::new(1, 7));
        assert_eq!(g.get(&QQ, 0, 2), Rat::new(1, 2));
        // row |010>: gamma at |000>, delta at |010>
        assert_eq!(g.get(&QQ, 2, 0), Rat::new(1, 8));
        assert_eq!(g.get(&QQ, 2, 2), Rat::new(3, 11));
    }

    #[test]
    fn stochastic_gate_has_unit_column_sums() {
        let w = ExactWeights::stochastic(Rat::new(30, 101), Rat::new(40, 49)).unwrap();
        let g = face_gate(&QQ, &w);
        assert!(column_sums(&g).iter().all(|s| s.is_one()));
    }

    #[test]
    fn boundary_gates_are_stochastic() {
        let a = Rat::new(11, 23);
        let b = Rat::new(19, 32);
        let l = left_boundary_gate(&QQ, &a, &b);
        let r = right_boundary_gate(&QQ, &Rat::new(23, 53), &Rat::new(31, 71));
        assert!(column_sums(&l).iter().all(|s| s.is_one()));
        assert!(column_sums(&r).iter().all(|s| s.is_one()));
    }

    #[test]
    fn hop_gate_mixing_weights() {
        let g = hop_gate(&QQ, &Rat::new(1, 3));
        // 1/(1+1/3) = 3/4 stay, 1/4 swap
        assert_eq!(g.get(&QQ, 1, 1), Rat::new(3, 4));
        assert_eq!(g.get(&QQ, 1, 2), Rat::new(1, 4));
        assert_eq!(g.get(&QQ, 0, 0), Rat::one());
        // r = 0: identity
        let id = hop_gate(&QQ, &Rat::zero());
        assert_eq!(id, SpMat::identity(&QQ, 4));
    }
}
