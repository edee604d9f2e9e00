//! Real multivariate polynomials in canonical expanded form.
//!
//! Monomials are kept in a `BTreeMap` keyed by exponent vectors, so two
//! polynomials with equal coefficients compare equal and serialize in the
//! same order.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, f64>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: f64) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn variable(nvars: usize, var: usize) -> Self {
        assert!(
            var < nvars,
            "variable {var} out of range for {nvars} variables"
        );
        let mut exps = vec![0; nvars];
        exps[var] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(exps, 1.0);
        p
    }

    /// Builds a polynomial from `(coefficient, exponents)` pairs, merging
    /// duplicates and dropping zero coefficients.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (f64, Vec<u32>)>,
    {
        let mut p = Self::zero(nvars);
        for (c, e) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exps: Vec<u32>, c: f64) {
        if c == 0.0 {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0.0 {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterates `(coefficient, exponents)` in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (f64, &[u32])> {
        self.terms.iter().map(|(e, c)| (*c, e.as_slice()))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), *c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(self.nvars, 1.0);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[var] -= 1;
            out.add_term(d, c * f64::from(e[var]));
        }
        out
    }

    /// Re-embeds the polynomial into a larger variable set; variable `i`
    /// becomes variable `offset + i`.
    pub fn embed(&self, nvars: usize, offset: usize) -> Self {
        assert!(offset + self.nvars <= nvars);
        let mut out = Self::zero(nvars);
        for (e, c) in &self.terms {
            let mut big = vec![0; nvars];
            big[offset..offset + self.nvars].copy_from_slice(e);
            out.add_term(big, *c);
        }
        out
    }

    /// Evaluates at `x`; `x.len()` must equal `nvars` (checked by callers).
    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.nvars);
        if self.terms.is_empty() {
            return 0.0;
        }
        // Power table per variable, then one product per monomial.
        let max_exp = self
            .terms
            .keys()
            .flat_map(|e| e.iter().copied())
            .max()
            .unwrap_or(0) as usize;
        let mut powers = vec![1.0; self.nvars * (max_exp + 1)];
        for (v, &xv) in x.iter().enumerate() {
            let row = &mut powers[v * (max_exp + 1)..(v + 1) * (max_exp + 1)];
            for k in 1..=max_exp {
                row[k] = row[k - 1] * xv;
            }
        }
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter().enumerate().fold(*c, |acc, (v, &k)| {
                    acc * powers[v * (max_exp + 1) + k as usize]
                })
            })
            .sum()
    }
}

/// Canonical expanded form in the weight grammar, e.g. `x1^2 + y1^2 - 0.5*x1*y2`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (exps, &c)) in self.terms.iter().rev().enumerate() {
            let factors: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| {
                    let name = format!("{}{}", if v % 2 == 0 { 'x' } else { 'y' }, v / 2 + 1);
                    if e == 1 {
                        name
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            let mag = c.abs();
            match (i, c < 0.0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == 1.0 {
                f.write_str(&factors.join("*"))?;
            } else {
                write!(f, "{mag}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}
