//! Smith normal form over Z and rank/invariant-factor reduction over Z and
//! prime fields.
//!
//! Arithmetic runs on `i64` with overflow checks first; on overflow the same
//! reduction is repeated on big integers unless the fallback is disabled.

use num_bigint::BigInt;
use rayon::prelude::*;

use super::ring::{BigInts, Domain, MachineInts, Overflow, PrimeField};
use super::{LinalgError, Matrix, Ring, DENSE_THRESHOLD};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SnfConfig {
    pub bigint_fallback: bool,
}

impl Default for SnfConfig {
    fn default() -> Self {
        SnfConfig { bigint_fallback: true }
    }
}

/// `s = u * m * v` with `u`, `v` unimodular and `s` diagonal with each
/// diagonal entry dividing the next. Entries are arbitrary precision.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: Vec<Vec<BigInt>>,
    pub s: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
}

impl SmithForm {
    /// Nonzero diagonal entries of `s`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let n = self.s.len().min(self.s.first().map_or(0, Vec::len));
        (0..n)
            .map(|i| self.s[i][i].clone())
            .filter(|x| *x != BigInt::from(0))
            .collect()
    }
}

/// Rank and torsion coefficients (invariant factors > 1) of a matrix.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Invariants {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Method {
    /// Dense SNF at or above the density threshold, sparse elimination below.
    #[default]
    Auto,
    Dense,
    Sparse,
}

type Grid<E> = Vec<Vec<E>>;

struct Work<'d, D: Domain> {
    d: &'d D,
    a: Grid<D::Elem>,
    u: Option<Grid<D::Elem>>,
    v: Option<Grid<D::Elem>>,
    rows: usize,
    cols: usize,
}

fn identity<D: Domain>(d: &D, n: usize) -> Grid<D::Elem> {
    (0..n)
        .map(|i| (0..n).map(|j| d.from_i64(i64::from(i == j))).collect())
        .collect()
}

impl<'d, D: Domain> Work<'d, D> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            self.a.swap(i, j);
            if let Some(u) = &mut self.u {
                u.swap(i, j);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for row in &mut self.a {
                row.swap(i, j);
            }
            if let Some(v) = &mut self.v {
                for row in v {
                    row.swap(i, j);
                }
            }
        }
    }

    /// row[target] -= f * row[src]
    fn row_sub(&mut self, target: usize, src: usize, f: &D::Elem) -> Result<(), Overflow> {
        let d = self.d;
        for j in 0..self.cols {
            if !d.is_zero(&self.a[src][j]) {
                self.a[target][j] = d.sub_mul(&self.a[target][j], f, &self.a[src][j])?;
            }
        }
        if let Some(u) = &mut self.u {
            for j in 0..self.rows {
                if !d.is_zero(&u[src][j]) {
                    u[target][j] = d.sub_mul(&u[target][j], f, &u[src][j])?;
                }
            }
        }
        Ok(())
    }

    /// col[target] -= f * col[src]
    fn col_sub(&mut self, target: usize, src: usize, f: &D::Elem) -> Result<(), Overflow> {
        let d = self.d;
        for i in 0..self.rows {
            if !d.is_zero(&self.a[i][src]) {
                self.a[i][target] = d.sub_mul(&self.a[i][target], f, &self.a[i][src])?;
            }
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                if !d.is_zero(&row[src]) {
                    row[target] = d.sub_mul(&row[target], f, &row[src])?;
                }
            }
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) -> Result<(), Overflow> {
        let d = self.d;
        for j in 0..self.cols {
            self.a[i][j] = d.neg(&self.a[i][j])?;
        }
        if let Some(u) = &mut self.u {
            for j in 0..self.rows {
                u[i][j] = d.neg(&u[i][j])?;
            }
        }
        Ok(())
    }

    fn smallest_in_block(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(u128, usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = &self.a[i][j];
                if !self.d.is_zero(x) {
                    let m = self.d.magnitude(x);
                    if best.is_none_or(|b| m < b.0) {
                        best = Some((m, i, j));
                    }
                }
            }
        }
        best.map(|b| (b.1, b.2))
    }

    fn run(&mut self) -> Result<(), Overflow> {
        let d = self.d;
        let mut t = 0;
        while t < self.rows.min(self.cols) {
            let Some((pi, pj)) = self.smallest_in_block(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut leftover = false;
                for i in t + 1..self.rows {
                    if !d.is_zero(&self.a[i][t]) {
                        let q = d.quotient(&self.a[i][t], &self.a[t][t])?;
                        self.row_sub(i, t, &q)?;
                        leftover |= !d.is_zero(&self.a[i][t]);
                    }
                }
                for j in t + 1..self.cols {
                    if !d.is_zero(&self.a[t][j]) {
                        let q = d.quotient(&self.a[t][j], &self.a[t][t])?;
                        self.col_sub(j, t, &q)?;
                        leftover |= !d.is_zero(&self.a[t][j]);
                    }
                }
                if leftover {
                    // a remainder smaller than the pivot survived; make it the pivot
                    let mut best: Option<(u128, bool, usize)> = None;
                    for i in t + 1..self.rows {
                        let x = &self.a[i][t];
                        if !d.is_zero(x) && best.is_none_or(|b| d.magnitude(x) < b.0) {
                            best = Some((d.magnitude(x), true, i));
                        }
                    }
                    for j in t + 1..self.cols {
                        let x = &self.a[t][j];
                        if !d.is_zero(x) && best.is_none_or(|b| d.magnitude(x) < b.0) {
                            best = Some((d.magnitude(x), false, j));
                        }
                    }
                    match best {
                        Some((_, true, i)) => self.swap_rows(t, i),
                        Some((_, false, j)) => self.swap_cols(t, j),
                        None => unreachable!("leftover entry vanished"),
                    }
                    continue;
                }
                let mut offender = None;
                'scan: for i in t + 1..self.rows {
                    for j in t + 1..self.cols {
                        if !d.divides(&self.a[t][t], &self.a[i][j])? {
                            offender = Some(i);
                            break 'scan;
                        }
                    }
                }
                match offender {
                    Some(i) => {
                        let minus_one = d.from_i64(-1);
                        self.row_sub(t, i, &minus_one)?;
                    }
                    None => break,
                }
            }
            if d.is_negative(&self.a[t][t]) {
                self.negate_row(t)?;
            }
            t += 1;
        }
        Ok(())
    }
}

fn dense_grid<D: Domain>(d: &D, m: &Matrix) -> Grid<D::Elem> {
    let mut g = vec![vec![d.zero(); m.cols()]; m.rows()];
    for (i, j, v) in m.triplets() {
        g[i][j] = d.from_i64(v);
    }
    g
}

fn snf_in<'d, D: Domain>(d: &'d D, m: &Matrix, track: bool) -> Result<Work<'d, D>, Overflow> {
    let (rows, cols) = m.shape();
    let mut w = Work {
        d,
        a: dense_grid(d, m),
        u: track.then(|| identity(d, rows)),
        v: track.then(|| identity(d, cols)),
        rows,
        cols,
    };
    w.run()?;
    Ok(w)
}

fn to_big<D: Domain>(d: &D, g: &Grid<D::Elem>) -> Vec<Vec<BigInt>> {
    g.iter().map(|r| r.iter().map(|x| d.to_bigint(x)).collect()).collect()
}

fn smith_in<D: Domain>(d: &D, m: &Matrix) -> Result<SmithForm, Overflow> {
    let w = snf_in(d, m, true)?;
    Ok(SmithForm {
        u: to_big(d, w.u.as_ref().expect("tracked")),
        s: to_big(d, &w.a),
        v: to_big(d, w.v.as_ref().expect("tracked")),
    })
}

/// Smith normal form with big-integer fallback enabled.
pub fn smith_normal_form(m: &Matrix) -> Result<SmithForm, LinalgError> {
    smith_normal_form_with(m, SnfConfig::default())
}

pub fn smith_normal_form_with(m: &Matrix, config: SnfConfig) -> Result<SmithForm, LinalgError> {
    match smith_in(&MachineInts, m) {
        Ok(s) => Ok(s),
        Err(Overflow) if config.bigint_fallback => {
            Ok(smith_in(&BigInts, m).expect("big integers do not overflow"))
        }
        Err(Overflow) => Err(LinalgError::ArithmeticOverflow),
    }
}

/// Eliminates with unit pivots, choosing the shortest pivot row to limit
/// fill-in. Returns the number of unit pivots and the rows/columns that
/// could not be eliminated, as a dense block.
fn unit_eliminate<D: Domain>(
    d: &D,
    m: &Matrix,
) -> Result<(usize, Grid<D::Elem>), Overflow> {
    let (nrows, ncols) = m.shape();
    let mut rows: Vec<Vec<(usize, D::Elem)>> = m
        .row_lists()
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|(j, v)| (j, d.from_i64(v)))
                .filter(|(_, v)| !d.is_zero(v))
                .collect()
        })
        .collect();
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); ncols];
    for (i, r) in rows.iter().enumerate() {
        for (j, _) in r {
            col_rows[*j].push(i);
        }
    }
    let mut row_alive = vec![true; nrows];
    let mut col_alive = vec![true; ncols];
    let mut pivots = 0usize;

    let entry = |row: &Vec<(usize, D::Elem)>, j: usize| -> Option<D::Elem> {
        row.binary_search_by_key(&j, |e| e.0).ok().map(|k| row[k].1.clone())
    };

    let mut progress = true;
    while progress {
        progress = false;
        for j in 0..ncols {
            if !col_alive[j] {
                continue;
            }
            let mut holders: Vec<usize> = std::mem::take(&mut col_rows[j]);
            holders.sort_unstable();
            holders.dedup();
            holders.retain(|&i| row_alive[i] && entry(&rows[i], j).is_some());
            let pivot_row = holders
                .iter()
                .copied()
                .filter(|&i| d.is_unit(&entry(&rows[i], j).expect("present")))
                .min_by_key(|&i| rows[i].len());
            let Some(p) = pivot_row else {
                col_rows[j] = holders;
                continue;
            };
            let inv = d.unit_inverse(&entry(&rows[p], j).expect("present"));
            let pivot = rows[p].clone();
            for &i in &holders {
                if i == p {
                    continue;
                }
                let a = entry(&rows[i], j).expect("present");
                let f = d.mul(&a, &inv)?;
                rows[i] = combine(d, &rows[i], &f, &pivot)?;
                for (c, _) in &pivot {
                    if *c != j {
                        col_rows[*c].push(i);
                    }
                }
            }
            row_alive[p] = false;
            col_alive[j] = false;
            pivots += 1;
            progress = true;
        }
    }

    let live_cols: Vec<usize> = (0..ncols).filter(|&j| col_alive[j]).collect();
    let mut col_pos = vec![usize::MAX; ncols];
    for (k, &j) in live_cols.iter().enumerate() {
        col_pos[j] = k;
    }
    let mut rest = Vec::new();
    for i in 0..nrows {
        if !row_alive[i] || rows[i].is_empty() {
            continue;
        }
        let mut line = vec![d.zero(); live_cols.len()];
        let mut any = false;
        for (j, v) in &rows[i] {
            if col_alive[*j] {
                line[col_pos[*j]] = v.clone();
                any = true;
            }
        }
        if any {
            rest.push(line);
        }
    }
    Ok((pivots, rest))
}

/// `a - f * b` on sorted sparse rows.
fn combine<D: Domain>(
    d: &D,
    a: &[(usize, D::Elem)],
    f: &D::Elem,
    b: &[(usize, D::Elem)],
) -> Result<Vec<(usize, D::Elem)>, Overflow> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut x, mut y) = (0, 0);
    while x < a.len() || y < b.len() {
        if y == b.len() || (x < a.len() && a[x].0 < b[y].0) {
            out.push(a[x].clone());
            x += 1;
        } else if x == a.len() || b[y].0 < a[x].0 {
            let fb = d.mul(f, &b[y].1)?;
            out.push((b[y].0, d.neg(&fb)?));
            y += 1;
        } else {
            let v = d.sub_mul(&a[x].1, f, &b[y].1)?;
            if !d.is_zero(&v) {
                out.push((a[x].0, v));
            }
            x += 1;
            y += 1;
        }
    }
    Ok(out)
}

fn invariants_in<D: Domain>(d: &D, m: &Matrix, method: Method) -> Result<Invariants, Overflow> {
    let dense = match method {
        Method::Dense => true,
        Method::Sparse => false,
        Method::Auto => m.density() >= DENSE_THRESHOLD && m.rows() * m.cols() <= 40_000,
    };
    let (ones, block) = if dense {
        (0, dense_grid(d, m))
    } else {
        unit_eliminate(d, m)?
    };
    let rows = block.len();
    let cols = block.first().map_or(0, Vec::len);
    let mut w = Work { d, a: block, u: None, v: None, rows, cols };
    w.run()?;
    let mut inv = Invariants { rank: ones, torsion: Vec::new() };
    for i in 0..rows.min(cols) {
        let x = &w.a[i][i];
        if d.is_zero(x) {
            continue;
        }
        inv.rank += 1;
        if !d.is_unit(x) {
            inv.torsion.push(d.to_u64(x).ok_or(Overflow)?);
        }
    }
    Ok(inv)
}

/// Rank of `m` over `ring`, and over Z its torsion coefficients.
pub fn invariants(m: &Matrix, ring: Ring) -> Result<Invariants, LinalgError> {
    invariants_with(m, ring, Method::Auto, SnfConfig::default())
}

pub fn invariants_with(m: &Matrix, ring: Ring, method: Method, config: SnfConfig) -> Result<Invariants, LinalgError> {
    match ring {
        Ring::Prime(p) => {
            invariants_in(&PrimeField { p: u64::from(p) }, m, method).map_err(|_| LinalgError::ArithmeticOverflow)
        }
        Ring::Integers => match invariants_in(&MachineInts, m, method) {
            Ok(inv) => Ok(inv),
            Err(Overflow) if config.bigint_fallback => {
                invariants_in(&BigInts, m, method).map_err(|_| LinalgError::ArithmeticOverflow)
            }
            Err(Overflow) => Err(LinalgError::ArithmeticOverflow),
        },
    }
}

/// Invariants of several matrices, computed in parallel.
pub fn invariants_many(ms: &[&Matrix], ring: Ring) -> Result<Vec<Invariants>, LinalgError> {
    ms.par_iter().map(|m| invariants(m, ring)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(s: &SmithForm) -> Vec<i64> {
        s.invariant_factors().iter().map(|x| i64::try_from(x).unwrap()).collect()
    }

    #[test]
    fn identity_and_zero() {
        let s = smith_normal_form(&Matrix::identity(3)).unwrap();
        assert_eq!(diag(&s), vec![1, 1, 1]);
        let z = smith_normal_form(&Matrix::zeros(2, 3)).unwrap();
        assert!(diag(&z).is_empty());
    }

    #[test]
    fn two_by_two() {
        // gcd of entries is 2 and |det| = 8
        let m = Matrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        let s = smith_normal_form(&m).unwrap();
        assert_eq!(diag(&s), vec![2, 4]);
    }

    #[test]
    fn overflow_needs_fallback() {
        let m = Matrix::from_rows(&[vec![i64::MAX, 0], vec![0, i64::MAX - 1]]);
        let off = SnfConfig { bigint_fallback: false };
        assert!(matches!(smith_normal_form_with(&m, off), Err(LinalgError::ArithmeticOverflow)));
        let s = smith_normal_form(&m).unwrap();
        let f = s.invariant_factors();
        assert_eq!(f[0], BigInt::from(1));
        assert_eq!(f[1], BigInt::from(i64::MAX) * BigInt::from(i64::MAX - 1));
    }

    #[test]
    fn sparse_and_dense_agree() {
        let m = Matrix::from_rows(&[vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 1], vec![1, 1, 1]]);
        let a = invariants_with(&m, Ring::Integers, Method::Dense, SnfConfig::default()).unwrap();
        let b = invariants_with(&m, Ring::Integers, Method::Sparse, SnfConfig::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(invariants(&m, Ring::Prime(2)).unwrap().rank, 3);
    }

    #[test]
    fn field_rank() {
        let m = Matrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        assert_eq!(invariants(&m, Ring::Prime(2)).unwrap().rank, 0);
        assert_eq!(invariants(&m, Ring::Prime(3)).unwrap().rank, 2);
        assert_eq!(invariants(&m, Ring::Integers).unwrap(), Invariants { rank: 2, torsion: vec![2, 4] });
    }
}
