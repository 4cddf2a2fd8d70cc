//! Exact linear algebra: generic dense elimination, multimodular sparse
//! RREF with rational reconstruction, and Dixon p-adic lifting for square
//! solves. Contracts are exact; internally everything routes through
//! word-sized prime fields and is verified exactly afterwards.

use crate::field::{Field, Fp, QQ};
use crate::modular::{crt_pair, rational_reconstruct, PrimeStream};
use crate::op::SpMat;
use crate::Rat;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

/// Affine solution set: particular + span(kernel).
#[derive(Clone, Debug)]
pub struct Solution<T> {
    pub particular: Vec<T>,
    pub kernel: Vec<Vec<T>>,
}

/// Dense RREF solve over any field. Returns None when inconsistent.
/// The particular solution sets all free variables to zero; the kernel
/// basis is the canonical RREF basis (one vector per free column).
pub fn dense_solve<F: Field>(
    ctx: &F,
    rows: Vec<Vec<F::El>>,
    rhs: Vec<F::El>,
) -> Option<Solution<F::El>> {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut aug: Vec<Vec<F::El>> = rows
        .into_iter()
        .zip(rhs)
        .map(|(mut r, b)| {
            r.push(b);
            r
        })
        .collect();
    let pivots = rref_in_place(ctx, &mut aug, ncols);
    // Inconsistency: a pivot in the augmented column.
    for row in &aug {
        if row[..ncols].iter().all(|v| ctx.is_zero(v)) && !ctx.is_zero(&row[ncols]) {
            return None;
        }
    }
    Some(extract_solution(ctx, &aug, &pivots, ncols, true))
}

/// Kernel of a dense matrix over any field.
pub fn dense_kernel<F: Field>(ctx: &F, mut rows: Vec<Vec<F::El>>, ncols: usize) -> Vec<Vec<F::El>> {
    let pivots = rref_in_place(ctx, &mut rows, ncols);
    extract_solution(ctx, &rows, &pivots, ncols, false).kernel
}

/// In-place RREF on the first `ncols` columns (extra columns ride along as
/// augmentation). Returns (pivot column, row) pairs in pivot-column order.
fn rref_in_place<F: Field>(
    ctx: &F,
    rows: &mut Vec<Vec<F::El>>,
    ncols: usize,
) -> Vec<(usize, usize)> {
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut next_row = 0usize;
    for col in 0..ncols {
        // Any nonzero pivot works in an exact field.
        let Some(pr) = (next_row..rows.len()).find(|&r| !ctx.is_zero(&rows[r][col])) else {
            continue;
        };
        rows.swap(next_row, pr);
        let inv = ctx.inv(&rows[next_row][col]).unwrap();
        for v in rows[next_row].iter_mut() {
            *v = ctx.mul(v, &inv);
        }
        let piv_row = rows[next_row].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == next_row || ctx.is_zero(&row[col]) {
                continue;
            }
            let c = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&piv_row) {
                ctx.mul_sub_assign(v, &c, pv);
            }
        }
        pivots.push((col, next_row));
        next_row += 1;
        if next_row == rows.len() {
            break;
        }
    }
    pivots
}

fn extract_solution<F: Field>(
    ctx: &F,
    rref: &[Vec<F::El>],
    pivots: &[(usize, usize)],
    ncols: usize,
    with_particular: bool,
) -> Solution<F::El> {
    let pivot_cols: Vec<usize> = pivots.iter().map(|p| p.0).collect();
    let mut particular = vec![ctx.zero(); ncols];
    if with_particular {
        for &(col, row) in pivots {
            particular[col] = rref[row][ncols].clone();
        }
    }
    let mut kernel = Vec::new();
    for free in 0..ncols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut k = vec![ctx.zero(); ncols];
        k[free] = ctx.one();
        for &(col, row) in pivots {
            k[col] = ctx.neg(&rref[row][free]);
        }
        kernel.push(k);
    }
    Solution { particular, kernel }
}

/// One sparse equation sum_j c_j x_j = rhs.
#[derive(Clone, Debug, Default)]
pub struct SparseRow {
    pub cols: Vec<(u32, Rat)>,
    pub rhs: Rat,
}

#[derive(Clone, Debug)]
pub enum ExactOutcome {
    Solved(Solution<Rat>),
    /// Row combination y with y^T A = 0 and y^T b != 0, listed as
    /// (original row index, coefficient).
    Infeasible { certificate: Vec<(usize, Rat)> },
}

/// Incremental echelon over F_p with sparse stored rows and a dense scratch.
pub struct FpEchelon {
    pub p: u64,
    ncols: usize,
    /// pivot col -> index into rows.
    pivot_of_col: Vec<Option<u32>>,
    /// Each row: normalized (pivot entry 1), leading col = pivot.
    rows: Vec<Vec<(u32, u64)>>,
    pivot_cols: Vec<u32>,
    /// Original ids of inserted (rank-contributing) rows.
    pub inserted_ids: Vec<usize>,
    scratch: Vec<u64>,
}

pub enum InsertOutcome {
    ReducedToZero,
    NewPivot(u32),
}

impl FpEchelon {
    /// `ncols` counts unknown columns only; an augmented right-hand column
    /// may be carried by passing column index `ncols` in rows.
    pub fn new(p: u64, ncols: usize) -> Self {
        FpEchelon {
            p,
            ncols,
            pivot_of_col: vec![None; ncols + 1],
            rows: Vec::new(),
            pivot_cols: Vec::new(),
            inserted_ids: Vec::new(),
            scratch: vec![0; ncols + 1],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce a row against the echelon and insert the remainder.
    pub fn insert(&mut self, row: &[(u32, u64)], orig_id: usize) -> InsertOutcome {
        use std::cmp::Reverse;
        use std::collections::BinaryHeap;
        let p = self.p;
        let fp = Fp(p);
        // Dense scratch plus a min-heap frontier; fill is always to the
        // right of the column being eliminated, so the heap preserves order.
        let mut frontier: BinaryHeap<Reverse<u32>> = BinaryHeap::with_capacity(row.len() * 2);
        let mut touched: Vec<u32> = Vec::with_capacity(row.len() * 4);
        for &(c, v) in row {
            let vm = v % p;
            if vm == 0 {
                continue;
            }
            if self.scratch[c as usize] == 0 {
                frontier.push(Reverse(c));
                touched.push(c);
            }
            self.scratch[c as usize] = crate::modular::add_mod(self.scratch[c as usize], vm, p);
        }
        let mut lead: Option<u32> = None;
        while let Some(Reverse(c)) = frontier.pop() {
            let val = self.scratch[c as usize];
            if val == 0 {
                continue;
            }
            if let Some(ri) = self.pivot_of_col[c as usize] {
                // Eliminate with stored row (pivot entry is 1).
                let coef = val;
                let stored = &self.rows[ri as usize];
                for &(sc, sv) in stored {
                    let cur = self.scratch[sc as usize];
                    let newv =
                        crate::modular::sub_mod(cur, crate::modular::mul_mod(coef, sv, p), p);
                    if cur == 0 && newv != 0 {
                        frontier.push(Reverse(sc));
                        touched.push(sc);
                    }
                    self.scratch[sc as usize] = newv;
                }
            } else {
                lead = Some(c);
                break;
            }
        }
        match lead {
            None => {
                for &c in &touched {
                    self.scratch[c as usize] = 0;
                }
                InsertOutcome::ReducedToZero
            }
            Some(lc) => {
                // Normalize and store the remainder of the scratch.
                let inv = fp.inv(&self.scratch[lc as usize]).unwrap();
                let mut stored: Vec<(u32, u64)> = Vec::new();
                touched.sort_unstable();
                touched.dedup();
                for &c in &touched {
                    let v = self.scratch[c as usize];
                    self.scratch[c as usize] = 0;
                    if v != 0 && c >= lc {
                        stored.push((c, crate::modular::mul_mod(v, inv, p)));
                    }
                }
                self.pivot_of_col[lc as usize] = Some(self.rows.len() as u32);
                self.rows.push(stored);
                self.pivot_cols.push(lc);
                self.inserted_ids.push(orig_id);
                InsertOutcome::NewPivot(lc)
            }
        }
    }

    /// Back-eliminate to full RREF. Call once after all insertions.
    pub fn finalize(&mut self) {
        let p = self.p;
        // Process pivots from rightmost to leftmost.
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(self.pivot_cols[i]));
        for &i in &order {
            let pc = self.pivot_cols[i];
            let piv_row = self.rows[i].clone();
            for j in 0..self.rows.len() {
                if j == i {
                    continue;
                }
                let coef = match self.rows[j].binary_search_by_key(&pc, |e| e.0) {
                    Ok(k) => self.rows[j][k].1,
                    Err(_) => continue,
                };
                if coef == 0 {
                    continue;
                }
                // rows[j] -= coef * piv_row (sparse merge)
                let a = &self.rows[j];
                let mut out = Vec::with_capacity(a.len() + piv_row.len());
                let (mut x, mut y) = (0usize, 0usize);
                while x < a.len() || y < piv_row.len() {
                    if y >= piv_row.len() || (x < a.len() && a[x].0 < piv_row[y].0) {
                        out.push(a[x]);
                        x += 1;
                    } else if x >= a.len() || piv_row[y].0 < a[x].0 {
                        let v = crate::modular::sub_mod(0, crate::modular::mul_mod(coef, piv_row[y].1, p), p);
                        if v != 0 {
                            out.push((piv_row[y].0, v));
                        }
                        y += 1;
                    } else {
                        let v = crate::modular::sub_mod(a[x].1, crate::modular::mul_mod(coef, piv_row[y].1, p), p);
                        if v != 0 {
                            out.push((a[x].0, v));
                        }
                        x += 1;
                        y += 1;
                    }
                }
                self.rows[j] = out;
            }
        }
        // Rebuild pivot index in column order.
        let mut idx: Vec<(u32, Vec<(u32, u64)>, usize)> = Vec::with_capacity(self.rows.len());
        for i in 0..self.rows.len() {
            idx.push((self.pivot_cols[i], std::mem::take(&mut self.rows[i]), self.inserted_ids[i]));
        }
        idx.sort_by_key(|e| e.0);
        self.pivot_of_col = vec![None; self.ncols + 1];
        self.rows.clear();
        self.pivot_cols.clear();
        self.inserted_ids.clear();
        for (i, (pc, row, id)) in idx.into_iter().enumerate() {
            self.pivot_of_col[pc as usize] = Some(i as u32);
            self.pivot_cols.push(pc);
            self.rows.push(row);
            self.inserted_ids.push(id);
        }
    }

    pub fn pivot_cols(&self) -> &[u32] {
        &self.pivot_cols
    }

    pub fn rows(&self) -> &[Vec<(u32, u64)>] {
        &self.rows
    }

    /// Entry of the RREF row with pivot column `pc` at column `c`.
    pub fn rref_entry(&self, pc: u32, c: u32) -> u64 {
        let ri = self.pivot_of_col[pc as usize].unwrap() as usize;
        match self.rows[ri].binary_search_by_key(&c, |e| e.0) {
            Ok(k) => self.rows[ri][k].1,
            Err(_) => 0,
        }
    }
}

/// Reduce a rational sparse row mod p; None when a denominator hits p.
fn row_mod_p(row: &SparseRow, p: u64, aug_col: u32) -> Option<Vec<(u32, u64)>> {
    let mut out = Vec::with_capacity(row.cols.len() + 1);
    for (c, v) in &row.cols {
        out.push((*c, v.mod_p(p)?));
    }
    if !row.rhs.is_zero() {
        out.push((aug_col, row.rhs.mod_p(p)?));
    }
    Some(out)
}

/// Solve a sparse rational system exactly by multimodular RREF with
/// rational reconstruction and exact verification.
pub fn solve_sparse_exact(ncols: usize, rows: &[SparseRow]) -> ExactOutcome {
    let mut primes = PrimeStream::new();
    let aug = ncols as u32;

    // First prime pass fixes the conjectured pivot structure and detects
    // inconsistency; later passes must agree or the prime is discarded.
    'restart: loop {
        let p0 = primes.next().unwrap();
        let Some(ech0) = echelon_pass(rows, ncols, p0) else {
            continue 'restart;
        };
        if ech0.pivot_of_col[ncols].is_some() {
            // Pivot in the augmented column: inconsistent. Build an exact
            // certificate from the rows that entered the echelon.
            return ExactOutcome::Infeasible {
                certificate: exact_certificate(rows, ncols, &ech0.inserted_ids),
            };
        }
        let pivot_cols = ech0.pivot_cols().to_vec();
        let free_cols: Vec<u32> = (0..ncols as u32).filter(|c| !pivot_cols.contains(c)).collect();

        // Accumulate CRT images of every needed RREF entry:
        // per pivot row: entries at free columns and the augmented column.
        let mut modulus = BigInt::from(p0);
        let mut acc: Vec<Vec<BigInt>> = ech0
            .pivot_cols()
            .iter()
            .map(|&pc| {
                let mut v: Vec<BigInt> =
                    free_cols.iter().map(|&fc| BigInt::from(ech0.rref_entry(pc, fc))).collect();
                v.push(BigInt::from(ech0.rref_entry(pc, aug)));
                v
            })
            .collect();

        loop {
            // Attempt reconstruction.
            if let Some(sol) = try_reconstruct(&pivot_cols, &free_cols, &acc, &modulus, ncols) {
                if verify_solution(rows, &sol) {
                    return ExactOutcome::Solved(sol);
                }
            }
            // Add one more prime.
            let p = primes.next().unwrap();
            let Some(ech) = echelon_pass(rows, ncols, p) else {
                continue;
            };
            if ech.pivot_cols() != pivot_cols.as_slice() {
                // Disagreement: if the new prime sees a larger rank or an
                // earlier pivot set, the first prime was bad; restart.
                if ech.rank() > pivot_cols.len() || ech.pivot_of_col[ncols].is_some() {
                    continue 'restart;
                }
                continue; // new prime is bad, skip it
            }
            for (i, &pc) in pivot_cols.iter().enumerate() {
                for (j, &fc) in free_cols.iter().enumerate() {
                    acc[i][j] = crt_pair(&acc[i][j], &modulus, ech.rref_entry(pc, fc), p);
                }
                let j = free_cols.len();
                acc[i][j] = crt_pair(&acc[i][j], &modulus, ech.rref_entry(pc, aug), p);
            }
            modulus *= BigInt::from(p);
        }
    }
}

/// Outcome of a generator-based modular solve.
#[derive(Clone, Debug)]
pub enum ModularOutcome {
    Solved(Solution<Rat>),
    /// Inconsistent modulo two independent primes: overwhelmingly certain
    /// (and for systems with a solution of p-unit denominators, provably)
    /// inconsistent over the rationals.
    Infeasible,
    /// No verified solution within the prime budget; the sampled system is
    /// likely underdetermined and the caller should add equations.
    Exhausted,
}

/// Solve a linear system whose rows are produced mod p by a generator:
/// the caller assembles each prime's image directly, which avoids ever
/// materializing large rational coefficient matrices. The right-hand side
/// rides as column index `ncols`. `verify` must check the reconstructed
/// solution exactly; reconstruction continues with more primes until it
/// passes.
pub fn solve_modular_rows(
    ncols: usize,
    gen: &mut dyn FnMut(u64) -> Option<Vec<Vec<(u32, u64)>>>,
    verify: &mut dyn FnMut(&Solution<Rat>) -> bool,
    max_primes: usize,
) -> ModularOutcome {
    let mut primes = PrimeStream::new();
    let aug = ncols as u32;
    let mut infeasible_seen = 0usize;
    let mut used = 0usize;
    'restart: loop {
        if used >= max_primes {
            return ModularOutcome::Exhausted;
        }
        let p0 = primes.next().unwrap();
        used += 1;
        let Some(rows0) = gen(p0) else { continue 'restart };
        let mut ech0 = FpEchelon::new(p0, ncols);
        for (i, r) in rows0.iter().enumerate() {
            ech0.insert(r, i);
        }
        ech0.finalize();
        if ech0.pivot_of_col[ncols].is_some() {
            infeasible_seen += 1;
            if infeasible_seen >= 2 {
                return ModularOutcome::Infeasible;
            }
            continue 'restart;
        }
        let pivot_cols = ech0.pivot_cols().to_vec();
        let free_cols: Vec<u32> =
            (0..ncols as u32).filter(|c| !pivot_cols.contains(c)).collect();
        let mut modulus = BigInt::from(p0);
        let mut acc: Vec<Vec<BigInt>> = ech0
            .pivot_cols()
            .iter()
            .map(|&pc| {
                let mut v: Vec<BigInt> = free_cols
                    .iter()
                    .map(|&fc| BigInt::from(ech0.rref_entry(pc, fc)))
                    .collect();
                v.push(BigInt::from(ech0.rref_entry(pc, aug)));
                v
            })
            .collect();
        loop {
            if let Some(sol) = try_reconstruct(&pivot_cols, &free_cols, &acc, &modulus, ncols) {
                if verify(&sol) {
                    return ModularOutcome::Solved(sol);
                }
            }
            if used >= max_primes {
                return ModularOutcome::Exhausted;
            }
            let p = primes.next().unwrap();
            used += 1;
            let Some(rows) = gen(p) else { continue };
            let mut ech = FpEchelon::new(p, ncols);
            for (i, r) in rows.iter().enumerate() {
                ech.insert(r, i);
            }
            ech.finalize();
            if ech.pivot_cols() != pivot_cols.as_slice() {
                if ech.rank() > pivot_cols.len() || ech.pivot_of_col[ncols].is_some() {
                    continue 'restart;
                }
                continue;
            }
            for (i, &pc) in pivot_cols.iter().enumerate() {
                for (j, &fc) in free_cols.iter().enumerate() {
                    acc[i][j] = crt_pair(&acc[i][j], &modulus, ech.rref_entry(pc, fc), p);
                }
                let j = free_cols.len();
                acc[i][j] = crt_pair(&acc[i][j], &modulus, ech.rref_entry(pc, aug), p);
            }
            modulus *= BigInt::from(p);
        }
    }
}

fn echelon_pass(rows: &[SparseRow], ncols: usize, p: u64) -> Option<FpEchelon> {
    let mut ech = FpEchelon::new(p, ncols);
    let aug = ncols as u32;
    for (i, row) in rows.iter().enumerate() {
        let r = row_mod_p(row, p, aug)?;
        ech.insert(&r, i);
    }
    ech.finalize();
    Some(ech)
}

fn try_reconstruct(
    pivot_cols: &[u32],
    free_cols: &[u32],
    acc: &[Vec<BigInt>],
    modulus: &BigInt,
    ncols: usize,
) -> Option<Solution<Rat>> {
    let mut particular = vec![Rat::zero(); ncols];
    let mut kernel: Vec<Vec<Rat>> = free_cols
        .iter()
        .map(|&fc| {
            let mut k = vec![Rat::zero(); ncols];
            k[fc as usize] = Rat::one();
            k
        })
        .collect();
    for (i, &pc) in pivot_cols.iter().enumerate() {
        for (j, _fc) in free_cols.iter().enumerate() {
            let r = rational_reconstruct(&acc[i][j], modulus)?;
            kernel[j][pc as usize] = -r;
        }
        particular[pc as usize] = rational_reconstruct(&acc[i][free_cols.len()], modulus)?;
    }
    Some(Solution { particular, kernel })
}

fn verify_solution(rows: &[SparseRow], sol: &Solution<Rat>) -> bool {
    for row in rows {
        let mut acc = Rat::zero();
        for (c, v) in &row.cols {
            let x = &sol.particular[*c as usize];
            if !x.is_zero() {
                acc += &(v * x);
            }
        }
        if acc != row.rhs {
            return false;
        }
        for k in &sol.kernel {
            let mut acc = Rat::zero();
            for (c, v) in &row.cols {
                let x = &k[*c as usize];
                if !x.is_zero() {
                    acc += &(v * x);
                }
            }
            if !acc.is_zero() {
                return false;
            }
        }
    }
    true
}

/// Exact elimination with row-combination tracking on a subset of rows,
/// yielding a combination with y^T A = 0, y^T b != 0.
fn exact_certificate(rows: &[SparseRow], ncols: usize, subset: &[usize]) -> Vec<(usize, Rat)> {
    // Dense exact RREF on the subset, carrying combination vectors.
    let ctx = QQ;
    let mut work: Vec<(Vec<Rat>, Rat, Vec<(usize, Rat)>)> = subset
        .iter()
        .map(|&i| {
            let mut dense = vec![Rat::zero(); ncols];
            for (c, v) in &rows[i].cols {
                dense[*c as usize] = v.clone();
            }
            (dense, rows[i].rhs.clone(), vec![(i, Rat::one())])
        })
        .collect();
    let mut pivot_rows: Vec<(usize, usize)> = Vec::new(); // (col, work row)
    for w in 0..work.len() {
        // Reduce row w by existing pivots.
        for &(pc, pr) in &pivot_rows {
            let c = work[w].0[pc].clone();
            if c.is_zero() {
                continue;
            }
            let (head, tail) = if pr < w {
                let (a, b) = work.split_at_mut(w);
                (&a[pr], &mut b[0])
            } else {
                unreachable!("pivot rows precede")
            };
            for j in 0..ncols {
                if !head.0[j].is_zero() {
                    let v = &tail.0[j] - &(&c * &head.0[j]);
                    tail.0[j] = v;
                }
            }
            tail.1 = &tail.1 - &(&c * &head.1);
            let mut combo = tail.2.clone();
            for (i, coef) in &head.2 {
                combo.push((*i, -(coef * &c)));
            }
            combo.sort_by_key(|e| e.0);
            let mut merged: Vec<(usize, Rat)> = Vec::new();
            for (i, v) in combo {
                match merged.last_mut() {
                    Some((li, lv)) if *li == i => *lv += &v,
                    _ => merged.push((i, v)),
                }
            }
            merged.retain(|(_, v)| !v.is_zero());
            tail.2 = merged;
        }
        // Normalize on its leading nonzero.
        if let Some(lead) = work[w].0.iter().position(|v| !v.is_zero()) {
            let inv = work[w].0[lead].recip();
            for v in work[w].0.iter_mut() {
                *v = &*v * &inv;
            }
            work[w].1 = &work[w].1 * &inv;
            for (_, v) in work[w].2.iter_mut() {
                *v = &*v * &inv;
            }
            pivot_rows.push((lead, w));
        } else if !work[w].1.is_zero() {
            return work[w].2.clone();
        }
    }
    let _ = ctx;
    // Subset turned out consistent over Q (prime was unlucky): rerun on all rows.
    let all: Vec<usize> = (0..rows.len()).collect();
    if subset.len() < rows.len() {
        exact_certificate(rows, ncols, &all)
    } else {
        panic!("inconsistency vanished during exact certificate computation");
    }
}

/// Basis of {v : M v = 0} with exact rational entries.
pub fn nullspace_exact(m: &SpMat<Rat>) -> Vec<Vec<Rat>> {
    let rows: Vec<SparseRow> = m
        .rows
        .iter()
        .map(|r| SparseRow { cols: r.clone(), rhs: Rat::zero() })
        .collect();
    match solve_sparse_exact(m.ncols, &rows) {
        ExactOutcome::Solved(sol) => sol.kernel,
        ExactOutcome::Infeasible { .. } => unreachable!("homogeneous system"),
    }
}

/// Square exact solve by Dixon p-adic lifting. The matrix is row-scaled to
/// integers once; lifting then runs in word arithmetic plus one BigInt
/// residue update per step. Returns None when the matrix is singular.
pub struct DixonSolver {
    n: usize,
    p: u64,
    /// Integer-scaled rows (sparse), and the scale applied to each row
    /// (rhs must be scaled identically).
    a_int: Vec<Vec<(u32, BigInt)>>,
    row_scale: Vec<BigInt>,
    /// Dense LU of A mod p (in place, L below diagonal, U on and above).
    lu: Vec<u64>,
    perm: Vec<usize>,
}

impl DixonSolver {
    pub fn new(a: &SpMat<Rat>) -> Option<Self> {
        let n = a.nrows;
        assert_eq!(n, a.ncols, "Dixon needs a square system");
        let mut a_int = Vec::with_capacity(n);
        let mut row_scale = Vec::with_capacity(n);
        for row in &a.rows {
            let mut lcm = BigInt::from(1);
            for (_, v) in row {
                let d = v.denom();
                let g = num_integer::Integer::gcd(&lcm, &d);
                lcm = &lcm / &g * &d;
            }
            let irow: Vec<(u32, BigInt)> = row
                .iter()
                .map(|(c, v)| (*c, v.numer() * (&lcm / v.denom())))
                .collect();
            a_int.push(irow);
            row_scale.push(lcm);
        }
        let mut primes = PrimeStream::new();
        for _ in 0..8 {
            let p = primes.next().unwrap();
            if let Some((lu, perm)) = Self::lu_mod_p(&a_int, n, p) {
                return Some(DixonSolver { n, p, a_int, row_scale, lu, perm });
            }
        }
        None
    }

    fn lu_mod_p(a_int: &[Vec<(u32, BigInt)>], n: usize, p: u64) -> Option<(Vec<u64>, Vec<usize>)> {
        let pb = BigInt::from(p);
        let mut m = vec![0u64; n * n];
        for (r, row) in a_int.iter().enumerate() {
            for (c, v) in row {
                let vm = v.mod_floor(&pb).to_u64().unwrap();
                m[r * n + *c as usize] = vm;
            }
        }
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            // Partial pivot: first nonzero in column k at/below row k.
            let piv = (k..n).find(|&r| m[r * n + k] != 0)?;
            if piv != k {
                perm.swap(k, piv);
                let (lo, hi) = (k.min(piv), k.max(piv));
                let (a, b) = m.split_at_mut(hi * n);
                a[lo * n..lo * n + n].swap_with_slice(&mut b[..n]);
            }
            let inv = crate::modular::inv_mod(m[k * n + k], p);
            for r in k + 1..n {
                let f = m[r * n + k];
                if f == 0 {
                    continue;
                }
                let mult = crate::modular::mul_mod(f, inv, p);
                m[r * n + k] = mult;
                let (pk, pr) = {
                    let (a, b) = m.split_at_mut(r * n);
                    (&a[k * n..k * n + n], &mut b[..n])
                };
                for j in k + 1..n {
                    let t = crate::modular::mul_mod(mult, pk[j], p);
                    pr[j] = crate::modular::sub_mod(pr[j], t, p);
                }
            }
        }
        Some((m, perm))
    }

    fn solve_mod_p(&self, b: &[u64]) -> Vec<u64> {
        let n = self.n;
        let p = self.p;
        let mut y = vec![0u64; n];
        for r in 0..n {
            let mut acc = b[self.perm[r]] % p;
            for j in 0..r {
                let t = crate::modular::mul_mod(self.lu[r * n + j], y[j], p);
                acc = crate::modular::sub_mod(acc, t, p);
            }
            y[r] = acc;
        }
        let mut x = vec![0u64; n];
        for r in (0..n).rev() {
            let mut acc = y[r];
            for j in r + 1..n {
                let t = crate::modular::mul_mod(self.lu[r * n + j], x[j], p);
                acc = crate::modular::sub_mod(acc, t, p);
            }
            x[r] = crate::modular::mul_mod(acc, crate::modular::inv_mod(self.lu[r * n + r], p), p);
        }
        x
    }

    /// Solve A x = b exactly (b rational). Lifting continues until rational
    /// reconstruction succeeds and the result verifies exactly.
    pub fn solve(&self, b: &[Rat]) -> Vec<Rat> {
        let n = self.n;
        let pb = BigInt::from(self.p);
        // Scale rhs per row, clear remaining denominators globally.
        let mut den_lcm = BigInt::from(1);
        for (bi, sc) in b.iter().zip(&self.row_scale) {
            let scaled_den = bi.denom();
            let _ = sc;
            let g = num_integer::Integer::gcd(&den_lcm, &scaled_den);
            den_lcm = &den_lcm / &g * &scaled_den;
        }
        let b_int: Vec<BigInt> = b
            .iter()
            .zip(&self.row_scale)
            .map(|(bi, sc)| bi.numer() * (&den_lcm / bi.denom()) * sc)
            .collect();

        let mut residue: Vec<BigInt> = b_int.clone();
        let mut x_acc: Vec<BigInt> = vec![BigInt::zero(); n];
        let mut pk = BigInt::from(1);
        let mut step = 0usize;
        loop {
            let rm: Vec<u64> = residue.iter().map(|r| r.mod_floor(&pb).to_u64().unwrap()).collect();
            let xk = self.solve_mod_p(&rm);
            for i in 0..n {
                x_acc[i] += &pk * BigInt::from(xk[i]);
            }
            // residue = (residue - A xk) / p
            for (r, arow) in self.a_int.iter().enumerate() {
                let mut acc = residue[r].clone();
                for (c, v) in arow {
                    if xk[*c as usize] != 0 {
                        acc -= v * BigInt::from(xk[*c as usize]);
                    }
                }
                debug_assert!((&acc).mod_floor(&pb).is_zero());
                residue[r] = acc / &pb;
            }
            pk *= &pb;
            step += 1;
            if step % 4 == 0 || residue.iter().all(|r| r.is_zero()) {
                if let Some(x) = self.try_finish(&x_acc, &pk, &den_lcm, b) {
                    return x;
                }
            }
        }
    }

    fn try_finish(&self, x_acc: &[BigInt], pk: &BigInt, den_lcm: &BigInt, b: &[Rat]) -> Option<Vec<Rat>> {
        let mut x = Vec::with_capacity(self.n);
        for xi in x_acc {
            let r = rational_reconstruct(xi, pk)?;
            x.push(r / Rat::from_big(den_lcm.clone(), BigInt::from(1)));
        }
        // Exact verification against the original rational system.
        for (r, arow) in self.a_int.iter().enumerate() {
            let mut acc = Rat::zero();
            for (c, v) in arow {
                let xv = &x[*c as usize];
                if !xv.is_zero() {
                    acc += &(&Rat::from_big(v.clone(), BigInt::from(1)) * xv);
                }
            }
            if acc != &Rat::from_big(self.row_scale[r].clone(), BigInt::from(1)) * &b[r] {
                return None;
            }
        }
        Some(x)
    }
}

use num_integer::Integer as _;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::QQ;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn dense_solve_identity() {
        let rows = vec![
            vec![Rat::one(), Rat::zero()],
            vec![Rat::zero(), Rat::one()],
        ];
        let sol = dense_solve(&QQ, rows, vec![r(3, 1), r(-7, 2)]).unwrap();
        assert_eq!(sol.particular, vec![r(3, 1), r(-7, 2)]);
        assert!(sol.kernel.is_empty());
    }

    #[test]
    fn dense_solve_rank_deficient() {
        // [[1,1],[2,2]] x = (1,2): particular (1,0), kernel span{(1,-1)} up to scale.
        let rows = vec![vec![r(1, 1), r(1, 1)], vec![r(2, 1), r(2, 1)]];
        let sol = dense_solve(&QQ, rows, vec![r(1, 1), r(2, 1)]).unwrap();
        assert_eq!(sol.particular, vec![r(1, 1), r(0, 1)]);
        assert_eq!(sol.kernel.len(), 1);
        let k = &sol.kernel[0];
        assert_eq!(&k[0] + &k[1], Rat::zero());
        assert!(!k[0].is_zero());
    }

    #[test]
    fn dense_solve_inconsistent() {
        let rows = vec![vec![r(1, 1), r(1, 1)], vec![r(1, 1), r(1, 1)]];
        assert!(dense_solve(&QQ, rows, vec![r(1, 1), r(2, 1)]).is_none());
    }

    #[test]
    fn sparse_exact_matches_dense_small() {
        let rows = vec![
            SparseRow { cols: vec![(0, r(1, 2)), (2, r(-1, 3))], rhs: r(1, 6) },
            SparseRow { cols: vec![(1, r(2, 1))], rhs: r(4, 1) },
            SparseRow { cols: vec![(0, r(1, 1)), (1, r(1, 1)), (2, r(1, 1))], rhs: r(3, 1) },
        ];
        match solve_sparse_exact(3, &rows) {
            ExactOutcome::Solved(sol) => {
                assert!(sol.kernel.is_empty());
                // verify
                assert_eq!(&(&sol.particular[0] * &r(1, 2)) - &(&sol.particular[2] * &r(1, 3)), r(1, 6));
                assert_eq!(&sol.particular[1] * &r(2, 1), r(4, 1));
            }
            _ => panic!("expected solution"),
        }
    }

    #[test]
    fn sparse_exact_certificate() {
        let rows = vec![
            SparseRow { cols: vec![(0, r(1, 1)), (1, r(1, 1))], rhs: r(1, 1) },
            SparseRow { cols: vec![(0, r(2, 1)), (1, r(2, 1))], rhs: r(3, 1) },
        ];
        match solve_sparse_exact(2, &rows) {
            ExactOutcome::Infeasible { certificate } => {
                // y^T A = 0 and y^T b != 0
                let mut a0 = Rat::zero();
                let mut a1 = Rat::zero();
                let mut bb = Rat::zero();
                for (i, c) in &certificate {
                    for (col, v) in &rows[*i].cols {
                        if *col == 0 {
                            a0 += &(c * v);
                        } else {
                            a1 += &(c * v);
                        }
                    }
                    bb += &(c * &rows[*i].rhs);
                }
                assert!(a0.is_zero() && a1.is_zero());
                assert!(!bb.is_zero());
            }
            _ => panic!("expected infeasible"),
        }
    }

    #[test]
    fn nullspace_of_identity_is_empty() {
        let id: SpMat<Rat> = SpMat::identity(&QQ, 4);
        assert!(nullspace_exact(&id).is_empty());
    }

    #[test]
    fn nullspace_rank_one() {
        let m = SpMat::from_triplets(
            &QQ,
            2,
            2,
            vec![
                (0, 0, Rat::one()),
                (0, 1, Rat::one()),
                (1, 0, Rat::one()),
                (1, 1, Rat::one()),
            ],
        );
        let ker = nullspace_exact(&m);
        assert_eq!(ker.len(), 1);
        assert_eq!(&ker[0][0] + &ker[0][1], Rat::zero());
    }

    #[test]
    fn dixon_solves_exactly() {
        // Random-ish well-conditioned rational system.
        let n = 12;
        let mut triplets = Vec::new();
        for i in 0..n {
            triplets.push((i, i, r(3 + i as i64, 2)));
            triplets.push((i, (i + 3) % n, r(-1, 3 + i as i64)));
            triplets.push((i, (i + 7) % n, r(1, 5)));
        }
        let a = SpMat::from_triplets(&QQ, n, n, triplets);
        let b: Vec<Rat> = (0..n).map(|i| r(i as i64 - 4, 7)).collect();
        let solver = DixonSolver::new(&a).unwrap();
        let x = solver.solve(&b);
        let ax = a.apply_dense(&QQ, &x);
        assert_eq!(ax, b);
    }
}
