//! Sparse operators on tensor products of power-of-two local spaces.
//!
//! Storage is row-major with sorted column indices and no explicit zeros.
//! Site 0 is the most significant digit group of the basis index, so a
//! basis state |s_1 s_2 ... s_N> of a qubit chain reads left to right as
//! the binary expansion of the index.

use crate::error::CoreError;
use crate::field::Field;
use std::collections::HashMap;

/// Ordered list of per-site local dimensions, each a power of two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiteLayout {
    bits: Vec<u32>,
}

impl SiteLayout {
    pub fn new(dims: &[usize]) -> Result<Self, CoreError> {
        let mut bits = Vec::with_capacity(dims.len());
        for &d in dims {
            if !d.is_power_of_two() || d < 2 {
                return Err(CoreError::BadLayout(format!("local dim {d} not a power of two >= 2")));
            }
            bits.push(d.trailing_zeros());
        }
        Ok(SiteLayout { bits })
    }

    pub fn qubits(n: usize) -> Self {
        SiteLayout { bits: vec![1; n] }
    }

    pub fn uniform(n: usize, local_dim: usize) -> Result<Self, CoreError> {
        Self::new(&vec![local_dim; n])
    }

    pub fn num_sites(&self) -> usize {
        self.bits.len()
    }

    pub fn local_dim(&self, site: usize) -> usize {
        1usize << self.bits[site]
    }

    pub fn total_bits(&self) -> u32 {
        self.bits.iter().sum()
    }

    pub fn dim(&self) -> usize {
        1usize << self.total_bits()
    }

    /// Bit shift of a site's digit within the packed index.
    pub fn shift(&self, site: usize) -> u32 {
        self.bits[site + 1..].iter().sum()
    }

    pub fn digit(&self, index: u64, site: usize) -> u64 {
        (index >> self.shift(site)) & ((1u64 << self.bits[site]) - 1)
    }

    pub fn with_digit(&self, index: u64, site: usize, value: u64) -> u64 {
        let sh = self.shift(site);
        let mask = ((1u64 << self.bits[site]) - 1) << sh;
        (index & !mask) | (value << sh)
    }
}

/// Sparse matrix, row-major, sorted column indices, no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpMat<T> {
    pub nrows: usize,
    pub ncols: usize,
    pub rows: Vec<Vec<(u32, T)>>,
}

impl<T: Clone + std::fmt::Debug + PartialEq> SpMat<T> {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        SpMat { nrows, ncols, rows: vec![Vec::new(); nrows] }
    }

    pub fn identity<F: Field<El = T>>(ctx: &F, n: usize) -> Self {
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            rows.push(vec![(i as u32, ctx.one())]);
        }
        SpMat { nrows: n, ncols: n, rows }
    }

    pub fn from_triplets<F: Field<El = T>>(
        ctx: &F,
        nrows: usize,
        ncols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, T)>,
    ) -> Self {
        let mut rows: Vec<Vec<(u32, T)>> = vec![Vec::new(); nrows];
        for (r, c, v) in triplets {
            rows[r].push((c as u32, v));
        }
        let mut m = SpMat { nrows, ncols, rows };
        m.normalize(ctx);
        m
    }

    /// Sort, merge duplicates, drop zeros.
    pub fn normalize<F: Field<El = T>>(&mut self, ctx: &F) {
        for row in &mut self.rows {
            row.sort_by_key(|e| e.0);
            let mut out: Vec<(u32, T)> = Vec::with_capacity(row.len());
            for (c, v) in row.drain(..) {
                match out.last_mut() {
                    Some((lc, lv)) if *lc == c => ctx.add_assign(lv, &v),
                    _ => out.push((c, v)),
                }
            }
            out.retain(|(_, v)| !ctx.is_zero(v));
            *row = out;
        }
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn get<F: Field<El = T>>(&self, ctx: &F, r: usize, c: usize) -> T {
        match self.rows[r].binary_search_by_key(&(c as u32), |e| e.0) {
            Ok(k) => self.rows[r][k].1.clone(),
            Err(_) => ctx.zero(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut rows: Vec<Vec<(u32, T)>> = vec![Vec::new(); self.ncols];
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                rows[*c as usize].push((r as u32, v.clone()));
            }
        }
        SpMat { nrows: self.ncols, ncols: self.nrows, rows }
    }

    pub fn map<U: Clone + std::fmt::Debug + PartialEq>(
        &self,
        mut f: impl FnMut(&T) -> U,
    ) -> SpMat<U> {
        SpMat {
            nrows: self.nrows,
            ncols: self.ncols,
            rows: self
                .rows
                .iter()
                .map(|row| row.iter().map(|(c, v)| (*c, f(v))).collect())
                .collect(),
        }
    }

    pub fn scale<F: Field<El = T>>(&self, ctx: &F, s: &T) -> Self {
        let mut out = self.map(|v| ctx.mul(v, s));
        out.normalize(ctx);
        out
    }

    pub fn add<F: Field<El = T>>(&self, ctx: &F, rhs: &Self) -> Result<Self, CoreError> {
        if self.nrows != rhs.nrows || self.ncols != rhs.ncols {
            return Err(CoreError::DimMismatch(format!(
                "add: {}x{} vs {}x{}",
                self.nrows, self.ncols, rhs.nrows, rhs.ncols
            )));
        }
        let mut rows = Vec::with_capacity(self.nrows);
        for (ra, rb) in self.rows.iter().zip(&rhs.rows) {
            rows.push(merge_rows(ctx, ra, rb, false));
        }
        Ok(SpMat { nrows: self.nrows, ncols: self.ncols, rows })
    }

    pub fn sub<F: Field<El = T>>(&self, ctx: &F, rhs: &Self) -> Result<Self, CoreError> {
        if self.nrows != rhs.nrows || self.ncols != rhs.ncols {
            return Err(CoreError::DimMismatch(format!(
                "sub: {}x{} vs {}x{}",
                self.nrows, self.ncols, rhs.nrows, rhs.ncols
            )));
        }
        let mut rows = Vec::with_capacity(self.nrows);
        for (ra, rb) in self.rows.iter().zip(&rhs.rows) {
            rows.push(merge_rows(ctx, ra, rb, true));
        }
        Ok(SpMat { nrows: self.nrows, ncols: self.ncols, rows })
    }

    pub fn matmul<F: Field<El = T>>(&self, ctx: &F, rhs: &Self) -> Result<Self, CoreError> {
        if self.ncols != rhs.nrows {
            return Err(CoreError::DimMismatch(format!(
                "matmul: {}x{} times {}x{}",
                self.nrows, self.ncols, rhs.nrows, rhs.ncols
            )));
        }
        let mut rows = Vec::with_capacity(self.nrows);
        let mut acc: HashMap<u32, T> = HashMap::new();
        for row in &self.rows {
            acc.clear();
            for (k, a) in row {
                for (c, b) in &rhs.rows[*k as usize] {
                    let prod = ctx.mul(a, b);
                    match acc.get_mut(c) {
                        Some(v) => ctx.add_assign(v, &prod),
                        None => {
                            acc.insert(*c, prod);
                        }
                    }
                }
            }
            let mut out: Vec<(u32, T)> =
                acc.drain().filter(|(_, v)| !ctx.is_zero(v)).collect();
            out.sort_by_key(|e| e.0);
            rows.push(out);
        }
        Ok(SpMat { nrows: self.nrows, ncols: rhs.ncols, rows })
    }

    /// AB - BA in one pass.
    pub fn commutator<F: Field<El = T>>(&self, ctx: &F, rhs: &Self) -> Result<Self, CoreError> {
        if self.nrows != self.ncols || rhs.nrows != rhs.ncols || self.nrows != rhs.nrows {
            return Err(CoreError::DimMismatch(format!(
                "commutator: {}x{} vs {}x{}",
                self.nrows, self.ncols, rhs.nrows, rhs.ncols
            )));
        }
        let ab = self.matmul(ctx, rhs)?;
        let ba = rhs.matmul(ctx, self)?;
        ab.sub(ctx, &ba)
    }

    pub fn kron<F: Field<El = T>>(&self, ctx: &F, rhs: &Self) -> Self {
        let nrows = self.nrows * rhs.nrows;
        let ncols = self.ncols * rhs.ncols;
        let mut rows = Vec::with_capacity(nrows);
        for ra in &self.rows {
            for rb in &rhs.rows {
                let mut row = Vec::with_capacity(ra.len() * rb.len());
                for (ca, va) in ra {
                    for (cb, vb) in rb {
                        row.push((
                            *ca * rhs.ncols as u32 + *cb,
                            ctx.mul(va, vb),
                        ));
                    }
                }
                row.sort_by_key(|e| e.0);
                rows.push(row);
            }
        }
        SpMat { nrows, ncols, rows }
    }

    pub fn apply_dense<F: Field<El = T>>(&self, ctx: &F, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.ncols);
        let mut out = vec![ctx.zero(); self.nrows];
        for (r, row) in self.rows.iter().enumerate() {
            let mut acc = ctx.zero();
            for (c, a) in row {
                if !ctx.is_zero(&v[*c as usize]) {
                    ctx.add_assign(&mut acc, &ctx.mul(a, &v[*c as usize]));
                }
            }
            out[r] = acc;
        }
        out
    }

    pub fn trace<F: Field<El = T>>(&self, ctx: &F) -> T {
        let mut acc = ctx.zero();
        for (r, row) in self.rows.iter().enumerate() {
            if let Ok(k) = row.binary_search_by_key(&(r as u32), |e| e.0) {
                ctx.add_assign(&mut acc, &row[k].1);
            }
        }
        acc
    }

    pub fn to_dense_rows<F: Field<El = T>>(&self, ctx: &F) -> Vec<Vec<T>> {
        let mut out = vec![vec![ctx.zero(); self.ncols]; self.nrows];
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                out[r][*c as usize] = v.clone();
            }
        }
        out
    }
}

fn merge_rows<F: Field>(
    ctx: &F,
    a: &[(u32, F::El)],
    b: &[(u32, F::El)],
    subtract: bool,
) -> Vec<(u32, F::El)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 <= b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 <= a[i].0);
        if take_a && take_b {
            let v = if subtract {
                ctx.sub(&a[i].1, &b[j].1)
            } else {
                ctx.add(&a[i].1, &b[j].1)
            };
            if !ctx.is_zero(&v) {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        } else if take_a {
            out.push(a[i].clone());
            i += 1;
        } else {
            let v = if subtract { ctx.neg(&b[j].1) } else { b[j].1.clone() };
            out.push((b[j].0, v));
            j += 1;
        }
    }
    out
}

/// Embed a local operator on `r` consecutive sites (periodic wrap allowed)
/// into the full chain, tensoring with the identity elsewhere.
pub fn embed<F: Field>(
    ctx: &F,
    local: &SpMat<F::El>,
    local_layout: &SiteLayout,
    chain: &SiteLayout,
    start_site: usize,
) -> Result<SpMat<F::El>, CoreError> {
    let r = local_layout.num_sites();
    let n = chain.num_sites();
    if r > n {
        return Err(CoreError::BadLayout(format!("local range {r} exceeds chain {n}")));
    }
    if local.nrows != local_layout.dim() || local.ncols != local_layout.dim() {
        return Err(CoreError::DimMismatch(format!(
            "operator dim {} vs layout dim {}",
            local.nrows,
            local_layout.dim()
        )));
    }
    let sites: Vec<usize> = (0..r).map(|k| (start_site + k) % n).collect();
    for (k, &s) in sites.iter().enumerate() {
        if chain.local_dim(s) != local_layout.local_dim(k) {
            return Err(CoreError::DimMismatch(format!(
                "site {s}: chain dim {} vs local dim {}",
                chain.local_dim(s),
                local_layout.local_dim(k)
            )));
        }
    }
    // Complement sites enumerate the identity factor.
    let comp: Vec<usize> = (0..n).filter(|s| !sites.contains(s)).collect();
    let comp_bits: u32 = comp.iter().map(|&s| chain.local_dim(s).trailing_zeros()).sum();
    let dim = chain.dim();
    let mut rows: Vec<Vec<(u32, F::El)>> = vec![Vec::new(); dim];

    // Precompute scatter: local index -> partial global index on `sites`.
    let scatter = |loc: u64| -> u64 {
        let mut g = 0u64;
        for (k, &s) in sites.iter().enumerate() {
            g |= local_layout.digit(loc, k) << chain.shift(s);
        }
        g
    };
    let scatter_comp = |rest: u64| -> u64 {
        let mut g = 0u64;
        let mut off = 0u32;
        for &s in comp.iter().rev() {
            let b = chain.local_dim(s).trailing_zeros();
            g |= ((rest >> off) & ((1 << b) - 1)) << chain.shift(s);
            off += b;
        }
        g
    };

    for (i_loc, row) in local.rows.iter().enumerate() {
        if row.is_empty() {
            continue;
        }
        let gi = scatter(i_loc as u64);
        for rest in 0..(1u64 << comp_bits) {
            let gr = scatter_comp(rest);
            let grow = (gi | gr) as usize;
            for (j_loc, v) in row {
                let gj = scatter(*j_loc as u64) | gr;
                rows[grow].push((gj as u32, v.clone()));
            }
        }
    }
    let mut m = SpMat { nrows: dim, ncols: dim, rows };
    m.normalize(ctx);
    Ok(m)
}

/// Partial trace over the given sites; the result lives on the remaining
/// sites in their original order.
pub fn partial_trace<F: Field>(
    ctx: &F,
    op: &SpMat<F::El>,
    layout: &SiteLayout,
    traced: &[usize],
) -> Result<(SpMat<F::El>, SiteLayout), CoreError> {
    let n = layout.num_sites();
    for &s in traced {
        if s >= n {
            return Err(CoreError::BadLayout(format!("traced site {s} out of range")));
        }
    }
    if op.nrows != layout.dim() || op.ncols != layout.dim() {
        return Err(CoreError::DimMismatch(format!(
            "operator dim {} vs layout dim {}",
            op.nrows,
            layout.dim()
        )));
    }
    let keep: Vec<usize> = (0..n).filter(|s| !traced.contains(s)).collect();
    let out_layout = SiteLayout::new(&keep.iter().map(|&s| layout.local_dim(s)).collect::<Vec<_>>())
        .expect("kept dims are powers of two");
    let pack_keep = |g: u64| -> u64 {
        let mut out = 0u64;
        for (k, &s) in keep.iter().enumerate() {
            out |= layout.digit(g, s) << out_layout.shift(k);
        }
        out
    };
    let traced_digits = |g: u64| -> u64 {
        let mut out = 0u64;
        let mut off = 0u32;
        for &s in traced {
            let b = layout.local_dim(s).trailing_zeros();
            out |= layout.digit(g, s) << off;
            off += b;
        }
        out
    };
    let mut triplets = Vec::new();
    for (r, row) in op.rows.iter().enumerate() {
        let tr = traced_digits(r as u64);
        let kr = pack_keep(r as u64);
        for (c, v) in row {
            if traced_digits(*c as u64) == tr {
                triplets.push((kr as usize, pack_keep(*c as u64) as usize, v.clone()));
            }
        }
    }
    Ok((
        SpMat::from_triplets(ctx, out_layout.dim(), out_layout.dim(), triplets),
        out_layout,
    ))
}

/// Sparse vector: sorted (basis index, value) pairs without zeros.
pub type SpVec<T> = Vec<(u64, T)>;

/// Sort, merge duplicate indices, drop zeros.
pub fn normalize_vec<F: Field>(ctx: &F, mut v: SpVec<F::El>) -> SpVec<F::El> {
    v.sort_unstable_by_key(|e| e.0);
    let mut out: SpVec<F::El> = Vec::with_capacity(v.len());
    for (i, val) in v {
        match out.last_mut() {
            Some((li, lv)) if *li == i => ctx.add_assign(lv, &val),
            _ => out.push((i, val)),
        }
    }
    out.retain(|(_, v)| !ctx.is_zero(v));
    out
}

pub fn vec_sub<F: Field>(ctx: &F, a: &SpVec<F::El>, b: &SpVec<F::El>) -> SpVec<F::El> {
    let mut out = a.clone();
    out.extend(b.iter().map(|(i, v)| (*i, ctx.neg(v))));
    normalize_vec(ctx, out)
}

/// Apply a local operator placed on the given (not necessarily adjacent)
/// sites to a sparse vector, without materializing the embedding.
/// `local_by_col` must be the transpose of the local operator, so its
/// row j lists the nonzero (i, value) entries of column j.
pub fn apply_embedded_vec<F: Field>(
    ctx: &F,
    local_by_col: &SpMat<F::El>,
    local_layout: &SiteLayout,
    chain: &SiteLayout,
    sites: &[usize],
    v: &[(u64, F::El)],
) -> SpVec<F::El> {
    debug_assert_eq!(sites.len(), local_layout.num_sites());
    let shifts: Vec<u32> = sites.iter().map(|&s| chain.shift(s)).collect();
    let bits: Vec<u32> = (0..sites.len())
        .map(|k| local_layout.local_dim(k).trailing_zeros())
        .collect();
    let mut clear_mask = 0u64;
    for (k, &sh) in shifts.iter().enumerate() {
        clear_mask |= ((1u64 << bits[k]) - 1) << sh;
    }
    let gather = |g: u64| -> u64 {
        let mut loc = 0u64;
        for k in 0..sites.len() {
            loc |= ((g >> shifts[k]) & ((1 << bits[k]) - 1)) << local_layout.shift(k);
        }
        loc
    };
    let scatter = |loc: u64| -> u64 {
        let mut g = 0u64;
        for k in 0..sites.len() {
            g |= local_layout.digit(loc, k) << shifts[k];
        }
        g
    };
    let mut out: SpVec<F::El> = Vec::with_capacity(v.len() * 2);
    for (g, c) in v {
        let j_loc = gather(*g);
        let rest = *g & !clear_mask;
        for (i_loc, a) in &local_by_col.rows[j_loc as usize] {
            out.push((rest | scatter(*i_loc as u64), ctx.mul(a, c)));
        }
    }
    normalize_vec(ctx, out)
}

/// Permutation operator for a site permutation: maps basis state s to the
/// state whose site perm[k] carries the digit previously at site k.
pub fn site_permutation<F: Field>(
    ctx: &F,
    layout: &SiteLayout,
    perm: &[usize],
) -> Result<SpMat<F::El>, CoreError> {
    let n = layout.num_sites();
    if perm.len() != n {
        return Err(CoreError::BadLayout("permutation length mismatch".into()));
    }
    for (k, &pk) in perm.iter().enumerate() {
        if layout.local_dim(k) != layout.local_dim(pk) {
            return Err(CoreError::BadLayout("permutation mixes unequal local dims".into()));
        }
    }
    let dim = layout.dim();
    let mut rows = Vec::with_capacity(dim);
    for _ in 0..dim {
        rows.push(Vec::new());
    }
    for g in 0..dim as u64 {
        let mut h = 0u64;
        for k in 0..n {
            h |= layout.digit(g, k) << layout.shift(perm[k]);
        }
        rows[h as usize].push((g as u32, ctx.one()));
    }
    Ok(SpMat { nrows: dim, ncols: dim, rows })
}

/// Cyclic shift by `k` sites: site s -> s + k (mod N).
pub fn cyclic_shift<F: Field>(
    ctx: &F,
    layout: &SiteLayout,
    k: usize,
) -> Result<SpMat<F::El>, CoreError> {
    let n = layout.num_sites();
    let perm: Vec<usize> = (0..n).map(|s| (s + k) % n).collect();
    site_permutation(ctx, layout, &perm)
}

/// Remove the component whose expansion starts with identity on the two
/// leftmost sites: q - (1/d12) 1_{12} x tr_{12}(q). Idempotent.
pub fn left_align<F: Field>(
    ctx: &F,
    q: &SpMat<F::El>,
    layout: &SiteLayout,
) -> Result<SpMat<F::El>, CoreError> {
    if layout.num_sites() < 3 {
        return Err(CoreError::BadLayout("left alignment needs at least 3 sites".into()));
    }
    let (tr12, rest_layout) = partial_trace(ctx, q, layout, &[0, 1])?;
    let d12 = layout.local_dim(0) * layout.local_dim(1);
    let inv = ctx
        .inv(&ctx.from_rat(&crate::Rat::from_i64(d12 as i64)))
        .expect("nonzero dim");
    let id12: SpMat<F::El> = SpMat::identity(ctx, d12);
    let correction = id12.kron(ctx, &tr12.scale(ctx, &inv));
    debug_assert_eq!(correction.nrows, layout.dim());
    let _ = rest_layout;
    q.sub(ctx, &correction)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::QQ;
    use crate::Rat;

    fn pauli_x() -> SpMat<Rat> {
        SpMat::from_triplets(&QQ, 2, 2, vec![(0, 1, Rat::one()), (1, 0, Rat::one())])
    }

    fn pauli_z() -> SpMat<Rat> {
        SpMat::from_triplets(
            &QQ,
            2,
            2,
            vec![(0, 0, Rat::one()), (1, 1, Rat::from_i64(-1))],
        )
    }

    #[test]
    fn embed_single_site_flip() {
        // X on site 0 of a 2-qubit chain: |00> -> |10>, i.e. column 0 has a 1 at row 2.
        let chain = SiteLayout::qubits(2);
        let local = SiteLayout::qubits(1);
        let x = embed(&QQ, &pauli_x(), &local, &chain, 0).unwrap();
        assert_eq!(x.get(&QQ, 2, 0), Rat::one());
        assert_eq!(x.get(&QQ, 0, 2), Rat::one());
        assert_eq!(x.nnz(), 4);
    }

    #[test]
    fn embed_identity_is_identity() {
        let chain = SiteLayout::qubits(3);
        let local = SiteLayout::qubits(1);
        let id2: SpMat<Rat> = SpMat::identity(&QQ, 2);
        let e = embed(&QQ, &id2, &local, &chain, 1).unwrap();
        assert_eq!(e, SpMat::identity(&QQ, 8));
    }

    #[test]
    fn embed_wraps_periodically() {
        // 2-site operator at start N-1 acts on sites N-1 and 0. Its dense
        // counterpart is conjugation of the unwrapped embedding by the cyclic
        // shift, which is the brute-force oracle.
        let chain = SiteLayout::qubits(3);
        let two = SiteLayout::qubits(2);
        let zx = pauli_z().kron(&QQ, &pauli_x());
        let wrapped = embed(&QQ, &zx, &two, &chain, 2).unwrap();
        let unwrapped = embed(&QQ, &zx, &two, &chain, 0).unwrap();
        // shift sites by 2: site 0 -> 2, 1 -> 0
        let s = cyclic_shift(&QQ, &chain, 2).unwrap();
        let oracle = s
            .matmul(&QQ, &unwrapped)
            .unwrap()
            .matmul(&QQ, &s.transpose())
            .unwrap();
        assert_eq!(wrapped, oracle);
    }

    #[test]
    fn embed_respects_composition() {
        let chain = SiteLayout::qubits(3);
        let local = SiteLayout::qubits(1);
        let x = pauli_x();
        let z = pauli_z();
        let ex = embed(&QQ, &x, &local, &chain, 1).unwrap();
        let ez = embed(&QQ, &z, &local, &chain, 1).unwrap();
        let xz = x.matmul(&QQ, &z).unwrap();
        let exz = embed(&QQ, &xz, &local, &chain, 1).unwrap();
        assert_eq!(ex.matmul(&QQ, &ez).unwrap(), exz);
    }

    #[test]
    fn commutator_basics() {
        let x = pauli_x();
        let z = pauli_z();
        assert!(x.commutator(&QQ, &x).unwrap().is_zero_matrix());
        // [X,Z] = XZ - ZX = -2iY entrywise: [[0,-2],[2,0]] over the rationals.
        let c = x.commutator(&QQ, &z).unwrap();
        assert_eq!(c.get(&QQ, 0, 1), Rat::from_i64(-2));
        assert_eq!(c.get(&QQ, 1, 0), Rat::from_i64(2));
    }

    #[test]
    fn disjoint_support_commutes() {
        let chain = SiteLayout::qubits(2);
        let local = SiteLayout::qubits(1);
        let z0 = embed(&QQ, &pauli_z(), &local, &chain, 0).unwrap();
        let z1 = embed(&QQ, &pauli_z(), &local, &chain, 1).unwrap();
        assert!(z0.commutator(&QQ, &z1).unwrap().is_zero_matrix());
    }

    #[test]
    fn partial_trace_factor() {
        // tr_2 (A x B) = tr(B) A
        let a = SpMat::from_triplets(
            &QQ,
            2,
            2,
            vec![
                (0, 0, Rat::new(1, 2)),
                (0, 1, Rat::from_i64(3)),
                (1, 1, Rat::from_i64(-1)),
            ],
        );
        let b = SpMat::from_triplets(
            &QQ,
            2,
            2,
            vec![(0, 0, Rat::from_i64(2)), (1, 1, Rat::from_i64(5)), (0, 1, Rat::one())],
        );
        let ab = a.kron(&QQ, &b);
        let layout = SiteLayout::qubits(2);
        let (t, _) = partial_trace(&QQ, &ab, &layout, &[1]).unwrap();
        let trb = Rat::from_i64(7);
        assert_eq!(t, a.scale(&QQ, &trb));
        // trace preserved
        assert_eq!(ab.trace(&QQ), t.trace(&QQ));
    }

    #[test]
    fn partial_trace_of_identity() {
        let layout = SiteLayout::qubits(2);
        let id: SpMat<Rat> = SpMat::identity(&QQ, 4);
        let (t, _) = partial_trace(&QQ, &id, &layout, &[0]).unwrap();
        assert_eq!(t, SpMat::identity(&QQ, 2).scale(&QQ, &Rat::from_i64(2)));
    }

    #[test]
    fn swap_trace_is_two() {
        let layout = SiteLayout::qubits(2);
        let swap = site_permutation(&QQ, &layout, &[1, 0]).unwrap();
        assert_eq!(swap.trace(&QQ), Rat::from_i64(2));
    }

    #[test]
    fn left_align_idempotent_and_kills_leading_identity() {
        let layout = SiteLayout::qubits(3);
        // 1 x 1 x Z has leading double identity; its left-aligned part is 0.
        let local = SiteLayout::qubits(1);
        let z2 = embed(&QQ, &pauli_z(), &local, &layout, 2).unwrap();
        let la = left_align(&QQ, &z2, &layout).unwrap();
        assert!(la.is_zero_matrix());
        // Z x 1 x 1 is already left-aligned.
        let z0 = embed(&QQ, &pauli_z(), &local, &layout, 0).unwrap();
        let la0 = left_align(&QQ, &z0, &layout).unwrap();
        assert_eq!(la0, z0);
        let la00 = left_align(&QQ, &la0, &layout).unwrap();
        assert_eq!(la00, la0);
    }
}
