//! Periodic rings of glued sites and extensive operators on them.

use crate::ChargesError;
use dr54_core::field::Field;
use dr54_core::op::{embed, SiteLayout, SpMat};

/// Ring of `sites` sites with the given power-of-two local dimension.
#[derive(Clone, Debug)]
pub struct Ring {
    pub sites: usize,
    pub local_dim: usize,
    pub layout: SiteLayout,
}

impl Ring {
    pub fn new(sites: usize, local_dim: usize) -> Result<Self, ChargesError> {
        let layout = SiteLayout::uniform(sites, local_dim)?;
        Ok(Ring { sites, local_dim, layout })
    }

    pub fn glued(sites: usize) -> Result<Self, ChargesError> {
        Ring::new(sites, 4)
    }

    pub fn qubits(sites: usize) -> Result<Self, ChargesError> {
        Ring::new(sites, 2)
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    fn window_layout(&self, window: usize) -> SiteLayout {
        SiteLayout::uniform(window, self.local_dim).expect("power-of-two dims")
    }

    /// Local operator embedded with its leftmost site at `start`
    /// (periodic wrap).
    pub fn embed_at<F: Field>(
        &self,
        ctx: &F,
        local: &SpMat<F::El>,
        window: usize,
        start: usize,
    ) -> Result<SpMat<F::El>, ChargesError> {
        Ok(embed(ctx, local, &self.window_layout(window), &self.layout, start)?)
    }

    /// Extensive operator: sum of the local operator over all starts that
    /// are multiples of `step`.
    pub fn shift_sum<F: Field>(
        &self,
        ctx: &F,
        local: &SpMat<F::El>,
        window: usize,
        step: usize,
    ) -> Result<SpMat<F::El>, ChargesError> {
        let mut acc = SpMat::zero(self.dim(), self.dim());
        let mut start = 0usize;
        while start < self.sites {
            let e = self.embed_at(ctx, local, window, start)?;
            acc = acc.add(ctx, &e)?;
            start += step;
        }
        Ok(acc)
    }
}

/// Exact check that [A, B] = 0 one column at a time: A(B e_c) = B(A e_c).
/// Both operators must be square of the same dimension; the transposes are
/// formed once for column access.
pub fn commute_exactly_colwise<F: Field>(ctx: &F, a: &SpMat<F::El>, b: &SpMat<F::El>) -> bool {
    assert_eq!(a.nrows, b.nrows);
    let at = a.transpose();
    let bt = b.transpose();
    let apply = |m: &SpMat<F::El>, mt: &SpMat<F::El>, v: &[(u32, F::El)]| -> Vec<(u32, F::El)> {
        let _ = m;
        let mut out: Vec<(u32, F::El)> = Vec::new();
        for (i, c) in v {
            for (j, w) in &mt.rows[*i as usize] {
                out.push((*j, ctx.mul(w, c)));
            }
        }
        out.sort_unstable_by_key(|e| e.0);
        let mut merged: Vec<(u32, F::El)> = Vec::with_capacity(out.len());
        for (i, val) in out {
            match merged.last_mut() {
                Some((li, lv)) if *li == i => ctx.add_assign(lv, &val),
                _ => merged.push((i, val)),
            }
        }
        merged.retain(|(_, v)| !ctx.is_zero(v));
        merged
    };
    for c in 0..a.nrows as u32 {
        let bc: Vec<(u32, F::El)> = bt.rows[c as usize].clone();
        let ac: Vec<(u32, F::El)> = at.rows[c as usize].clone();
        let abc = apply(a, &at, &bc);
        let bac = apply(b, &bt, &ac);
        if abc != bac {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use dr54_core::field::QQ;
    use dr54_core::Rat;

    #[test]
    fn shift_sum_counts_windows() {
        let ring = Ring::qubits(6).unwrap();
        let id: SpMat<Rat> = SpMat::identity(&QQ, 8);
        let s = ring.shift_sum(&QQ, &id, 3, 2).unwrap();
        // identity summed over 3 starts
        assert_eq!(s, SpMat::identity(&QQ, 64).scale(&QQ, &Rat::from_i64(3)));
    }

    #[test]
    fn colwise_commute_agrees_with_matrix_commutator() {
        let ring = Ring::qubits(4).unwrap();
        let z = SpMat::from_triplets(&QQ, 2, 2, vec![(0, 0, Rat::one()), (1, 1, Rat::from_i64(-1))]);
        let x = SpMat::from_triplets(&QQ, 2, 2, vec![(0, 1, Rat::one()), (1, 0, Rat::one())]);
        let a = ring.shift_sum(&QQ, &z, 1, 1).unwrap();
        let b = ring.shift_sum(&QQ, &x, 1, 1).unwrap();
        let c = ring.shift_sum(&QQ, &z.kron(&QQ, &z), 2, 1).unwrap();
        assert!(commute_exactly_colwise(&QQ, &a, &c));
        assert!(!commute_exactly_colwise(&QQ, &a, &b));
        assert_eq!(
            a.commutator(&QQ, &c).unwrap().is_zero_matrix(),
            commute_exactly_colwise(&QQ, &a, &c)
        );
    }
}
