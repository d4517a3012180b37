//! Sparse multivariate polynomials with interval coefficients.
//!
//! Coefficients are intervals so that the rounding committed while expanding a
//! bordered determinant symbolically is carried into every later enclosure.

use std::collections::BTreeMap;

use crate::interval::Interval;

/// Exponent vector; systems here never exceed eight variables.
pub type Monomial = Vec<u8>;

#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Interval>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Interval) -> Self {
        let mut p = Poly::zero(nvars);
        if !(c.lo == 0.0 && c.hi == 0.0) {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn from_f64(nvars: usize, c: f64) -> Self {
        Poly::constant(nvars, Interval::point(c))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = vec![0u8; nvars];
        m[i] = 1;
        let mut p = Poly::zero(nvars);
        p.terms.insert(m, Interval::ONE);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Interval)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, m: Monomial, c: Interval) {
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = *existing + c;
                if s.lo == 0.0 && s.hi == 0.0 {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                if !(c.lo == 0.0 && c.hi == 0.0) {
                    self.terms.insert(m, c);
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), *c);
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -*c)).collect(),
        }
    }

    pub fn scale(&self, k: Interval) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), *c * k);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(m, *ca * *cb);
            }
        }
        out
    }

    /// Variables that occur with nonzero exponent.
    pub fn support(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&i| self.terms.keys().any(|m| m[i] > 0))
            .collect()
    }

    pub fn degree_in(&self, var: usize) -> u8 {
        self.terms.keys().map(|m| m[var]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.iter().map(|&e| e as u32).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn derivative(&self, var: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m[var];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm[var] = e - 1;
            out.add_term(dm, *c * Interval::point(e as f64));
        }
        out
    }

    /// Natural interval extension over a box.
    pub fn eval_interval(&self, x: &[Interval]) -> Interval {
        let mut acc = Interval::ZERO;
        for (m, c) in &self.terms {
            let mut t = *c;
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    t = t * x[i].powi(e as u32);
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Floating evaluation at coefficient midpoints.
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = c.mid();
                for (i, &e) in m.iter().enumerate() {
                    if e > 0 {
                        t *= x[i].powi(e as i32);
                    }
                }
                t
            })
            .sum()
    }

    /// Sum of absolute term values at `x`; the natural scale for a relative residual.
    pub fn magnitude(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = c.mag();
                for (i, &e) in m.iter().enumerate() {
                    if e > 0 {
                        t *= x[i].abs().powi(e as i32);
                    }
                }
                t
            })
            .sum()
    }

    /// Enclosure of the polynomial over `x` with point (interval) values
    /// substituted for some variables, keeping the others symbolic.
    pub fn substitute(&self, values: &[Option<Interval>]) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut coef = *c;
            let mut mm = m.clone();
            for (i, v) in values.iter().enumerate() {
                if let Some(v) = v {
                    if mm[i] > 0 {
                        coef = coef * v.powi(mm[i] as u32);
                        mm[i] = 0;
                    }
                }
            }
            out.add_term(mm, coef);
        }
        out
    }

    /// Re-embed into a larger variable space: variable `i` becomes `map[i]`.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> Poly {
        let mut out = Poly::zero(nvars);
        for (m, c) in &self.terms {
            let mut mm = vec![0u8; nvars];
            for (i, &e) in m.iter().enumerate() {
                mm[map[i]] += e;
            }
            out.add_term(mm, *c);
        }
        out
    }
}

/// Determinant of a square matrix of polynomials by cofactor expansion with
/// memoisation over column subsets (O(n 2^n) products, fine for n <= 6).
pub fn det(matrix: &[Vec<Poly>]) -> Poly {
    let n = matrix.len();
    assert!(n > 0 && n <= 16);
    assert!(matrix.iter().all(|r| r.len() == n));
    let nvars = matrix[0][0].nvars();
    // minors[mask] = det of rows (n - popcount(mask))..n restricted to columns in mask
    let mut minors: Vec<Option<Poly>> = vec![None; 1 << n];
    minors[0] = Some(Poly::from_f64(nvars, 1.0));
    for mask in 1usize..(1 << n) {
        let k = mask.count_ones() as usize;
        let row = n - k;
        let mut acc = Poly::zero(nvars);
        let mut sign_pos = true;
        for col in 0..n {
            if mask & (1 << col) == 0 {
                continue;
            }
            let entry = &matrix[row][col];
            if !entry.is_zero() {
                let sub = minors[mask & !(1 << col)].as_ref().expect("filled");
                let prod = entry.mul(sub);
                acc = if sign_pos { acc.add(&prod) } else { acc.sub(&prod) };
            }
            sign_pos = !sign_pos;
        }
        minors[mask] = Some(acc);
    }
    minors[(1 << n) - 1].take().expect("filled")
}
