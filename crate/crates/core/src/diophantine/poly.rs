//! Sparse multivariate polynomials with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::number_theory::poly::QPoly;

/// Polynomial in named variables stored as `exponent vector -> coefficient`.
///
/// Zero coefficients are never stored. Coefficients are rational so that
/// normalized extremal polynomials fit; [`IntegerPolynomial::is_integral`]
/// tells whether the integer-coefficient bounds apply.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerPolynomial {
    names: Vec<String>,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl IntegerPolynomial {
    pub fn zero(names: Vec<String>) -> Self {
        IntegerPolynomial { names, terms: BTreeMap::new() }
    }

    /// Variables `x1, ..., xn`.
    pub fn default_names(n: usize) -> Vec<String> {
        if n == 1 {
            return vec!["x".into()];
        }
        (1..=n).map(|i| format!("x{i}")).collect()
    }

    pub fn constant(names: Vec<String>, c: BigRational) -> Self {
        let n = names.len();
        let mut p = Self::zero(names);
        p.add_term(vec![0; n], c);
        p
    }

    pub fn var(names: Vec<String>, i: usize) -> Self {
        let mut e = vec![0; names.len()];
        e[i] = 1;
        let mut p = Self::zero(names);
        p.add_term(e, BigRational::one());
        p
    }

    /// Univariate polynomial in `x` from coefficients, constant term first.
    pub fn univariate(coeffs: &[BigRational]) -> Self {
        let mut p = Self::zero(Self::default_names(1));
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(vec![i as u32], c.clone());
        }
        p
    }

    pub fn from_terms(names: Vec<String>, terms: impl IntoIterator<Item = (Vec<u32>, BigRational)>) -> Result<Self> {
        let mut p = Self::zero(names);
        for (e, c) in terms {
            if e.len() != p.nvars() {
                return Err(Error::InvalidInput(format!(
                    "exponent vector {e:?} has {} entries, expected {}",
                    e.len(),
                    p.nvars()
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Monic Chebyshev polynomial `2^{1-D} T_D(x)`.
    pub fn chebyshev_monic(d: u32) -> Self {
        let x = QPoly::x();
        let two_x = QPoly::from_i64(&[0, 2]);
        let (mut prev, mut cur) = (QPoly::one(), x);
        if d == 0 {
            return Self::univariate(prev.coeffs());
        }
        for _ in 1..d {
            let next = two_x.mul(&cur).sub(&prev);
            prev = cur;
            cur = next;
        }
        let scale = BigRational::new(BigInt::one(), BigInt::one() << (d - 1));
        let coeffs: Vec<BigRational> = cur.coeffs().iter().map(|c| c * &scale).collect();
        Self::univariate(&coeffs)
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    /// Largest absolute coefficient.
    pub fn height(&self) -> BigRational {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(BigRational::zero)
    }

    fn same_vars(&self, o: &Self) {
        assert_eq!(self.names, o.names, "polynomials over different variables");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.same_vars(o);
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn neg(&self) -> Self {
        IntegerPolynomial {
            names: self.names.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.same_vars(o);
        let mut p = Self::zero(self.names.clone());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        let mut p = Self::zero(self.names.clone());
        for (e, c) in &self.terms {
            p.add_term(e.clone(), c * k);
        }
        p
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(self.names.clone(), BigRational::one());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval_rational(&self, x: &[BigRational]) -> BigRational {
        assert_eq!(x.len(), self.nvars());
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    t *= xi;
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = c.to_f64().unwrap_or(f64::NAN);
                for (xi, &k) in x.iter().zip(e) {
                    t *= xi.powi(k as i32);
                }
                t
            })
            .sum()
    }

    /// Dense coefficients of a univariate polynomial.
    pub fn to_qpoly(&self) -> Option<QPoly> {
        if self.nvars() != 1 {
            return None;
        }
        let d = self.degree().unwrap_or(0) as usize;
        let mut c = vec![BigRational::zero(); d + 1];
        for (e, v) in &self.terms {
            c[e[0] as usize] = v.clone();
        }
        Some(QPoly::new(c))
    }

    /// Sparse term list `[e1,e2,...]:c` joined by `; `.
    pub fn to_term_list(&self) -> String {
        self.terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let e: Vec<String> = e.iter().map(u32::to_string).collect();
                format!("[{}]:{}", e.join(","), c)
            })
            .collect::<Vec<_>>()
            .join("; ")
    }
}

impl fmt::Display for IntegerPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // graded order, highest degree first
        let mut terms: Vec<(&Vec<u32>, &BigRational)> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let (da, db) = (a.0.iter().sum::<u32>(), b.0.iter().sum::<u32>());
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let monomial: Vec<String> = e
                .iter()
                .zip(&self.names)
                .filter(|(&k, _)| k > 0)
                .map(|(&k, n)| if k == 1 { n.clone() } else { format!("{n}^{k}") })
                .collect();
            if monomial.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                f.write_str(&monomial.join("*"))?;
            } else {
                write!(f, "{a}*{}", monomial.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Parses expressions such as `x^3 - 3/4*x` or `2*x1*x2^2 + 1`.
///
/// Variables are collected in order of first appearance unless they follow the
/// `x1, x2, ...` pattern, in which case they are sorted by index.
impl FromStr for IntegerPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let perr = |column: usize, message: &str| Error::Parse { line: 1, column, message: message.into() };
        let mut raw: Vec<(BigRational, Vec<(String, u32)>)> = Vec::new();
        let chars: Vec<char> = s.chars().collect();
        let mut i = 0;
        let skip = |i: &mut usize| {
            while *i < chars.len() && chars[*i].is_whitespace() {
                *i += 1;
            }
        };
        let number = |i: &mut usize| -> Option<BigInt> {
            let start = *i;
            while *i < chars.len() && chars[*i].is_ascii_digit() {
                *i += 1;
            }
            (start < *i).then(|| chars[start..*i].iter().collect::<String>().parse().unwrap())
        };
        skip(&mut i);
        if i == chars.len() {
            return Err(perr(1, "empty polynomial"));
        }
        loop {
            skip(&mut i);
            let mut sign = BigRational::one();
            if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                if chars[i] == '-' {
                    sign = -sign;
                }
                i += 1;
                skip(&mut i);
            } else if !raw.is_empty() {
                return Err(perr(i + 1, "expected + or -"));
            }
            let mut coef = sign;
            let mut vars = Vec::new();
            let mut expect_factor = true;
            while expect_factor {
                skip(&mut i);
                if let Some(n) = number(&mut i) {
                    let mut q = BigRational::from_integer(n);
                    if i < chars.len() && chars[i] == '/' {
                        i += 1;
                        let d = number(&mut i).ok_or_else(|| perr(i + 1, "expected denominator"))?;
                        if d.is_zero() {
                            return Err(perr(i, "zero denominator"));
                        }
                        q /= BigRational::from_integer(d);
                    }
                    coef *= q;
                } else if i < chars.len() && chars[i].is_ascii_alphabetic() {
                    let start = i;
                    while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                        i += 1;
                    }
                    let name: String = chars[start..i].iter().collect();
                    let mut k = 1;
                    if i < chars.len() && chars[i] == '^' {
                        i += 1;
                        let n = number(&mut i).ok_or_else(|| perr(i + 1, "expected exponent"))?;
                        k = n.to_u32().ok_or_else(|| perr(i, "exponent too large"))?;
                    }
                    vars.push((name, k));
                } else {
                    return Err(perr(i + 1, "expected number or variable"));
                }
                skip(&mut i);
                expect_factor = i < chars.len() && chars[i] == '*';
                if expect_factor {
                    i += 1;
                }
            }
            raw.push((coef, vars));
            skip(&mut i);
            if i == chars.len() {
                break;
            }
        }
        let mut names: Vec<String> = Vec::new();
        for (_, vars) in &raw {
            for (n, _) in vars {
                if !names.contains(n) {
                    names.push(n.clone());
                }
            }
        }
        let index = |n: &str| n.strip_prefix('x').and_then(|r| r.parse::<u32>().ok());
        if !names.is_empty() && names.iter().all(|n| index(n).is_some()) {
            names.sort_by_key(|n| index(n));
        }
        if names.is_empty() {
            names.push("x".into());
        }
        let mut p = IntegerPolynomial::zero(names.clone());
        for (c, vars) in raw {
            let mut e = vec![0; names.len()];
            for (n, k) in vars {
                e[names.iter().position(|m| *m == n).unwrap()] += k;
            }
            p.add_term(e, c);
        }
        Ok(p)
    }
}
