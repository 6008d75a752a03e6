//! Trace of a word as a polynomial in the generator entries.

use num_rational::BigRational;
use num_traits::One;

use super::poly::IntegerPolynomial;
use crate::error::{Error, Result};
use crate::words::Word;

/// `tr W` in the variables `a_j, b_j, c_j, d_j` (`j = 1..=m`), optionally with
/// every `d_j` eliminated through `a_j d_j - b_j c_j = 1`.
#[derive(Clone, Debug)]
pub struct TracePolynomial {
    /// The trace, or its numerator after elimination.
    pub numerator: IntegerPolynomial,
    /// Power of `a_j` in the denominator; all zero without elimination.
    pub denominator_powers: Vec<u32>,
    pub eliminated: bool,
    /// `(m + 2) |W|`, the degree allowance after elimination.
    pub degree_bound: u32,
}

impl TracePolynomial {
    /// Denominator monomial `∏ a_j^{p_j}` over the same variables.
    pub fn denominator(&self) -> IntegerPolynomial {
        let names = self.numerator.names().to_vec();
        let mut e = vec![0; names.len()];
        for (j, &p) in self.denominator_powers.iter().enumerate() {
            e[4 * j] = p;
        }
        let mut out = IntegerPolynomial::zero(names);
        out.add_term(e, BigRational::one());
        out
    }
}

/// Names `a1, b1, c1, d1, a2, ...`.
pub fn entry_names(m: usize) -> Vec<String> {
    (1..=m).flat_map(|j| ["a", "b", "c", "d"].map(|v| format!("{v}{j}"))).collect()
}

type PolyMatrix = [IntegerPolynomial; 4];

fn mat_mul(x: &PolyMatrix, y: &PolyMatrix) -> PolyMatrix {
    [
        x[0].mul(&y[0]).add(&x[1].mul(&y[2])),
        x[0].mul(&y[1]).add(&x[1].mul(&y[3])),
        x[2].mul(&y[0]).add(&x[3].mul(&y[2])),
        x[2].mul(&y[1]).add(&x[3].mul(&y[3])),
    ]
}

/// Entries of `W` as polynomials; inverse letters use the adjugate.
pub fn word_matrix_polynomials(w: &Word, m: usize) -> Result<[IntegerPolynomial; 4]> {
    if w.arity() > m {
        return Err(Error::Arity { index: w.arity() - 1, arity: m });
    }
    let names = entry_names(m);
    let var = |i: usize| IntegerPolynomial::var(names.clone(), i);
    let zero = IntegerPolynomial::zero(names.clone());
    let one = IntegerPolynomial::constant(names.clone(), BigRational::one());
    let mut acc: PolyMatrix = [one.clone(), zero.clone(), zero, one];
    for l in w.letters() {
        let j = 4 * l.index();
        let (a, b, c, d) = (var(j), var(j + 1), var(j + 2), var(j + 3));
        let g = if l.is_inverse() { [d, b.neg(), c.neg(), a] } else { [a, b, c, d] };
        acc = mat_mul(&acc, &g);
    }
    Ok(acc)
}

pub fn trace_polynomial(w: &Word, m: usize, eliminate: bool) -> Result<TracePolynomial> {
    let [x00, _, _, x11] = word_matrix_polynomials(w, m)?;
    let tr = x00.add(&x11);
    let degree_bound = (m as u32 + 2) * w.len() as u32;
    if !eliminate {
        return Ok(TracePolynomial {
            numerator: tr,
            denominator_powers: vec![0; m],
            eliminated: false,
            degree_bound,
        });
    }
    let names = tr.names().to_vec();
    let powers: Vec<u32> = (0..m).map(|j| tr.degree_in(4 * j + 3)).collect();
    // (1 + b_j c_j)^k for every needed k
    let one = IntegerPolynomial::constant(names.clone(), BigRational::one());
    let shifted: Vec<Vec<IntegerPolynomial>> = (0..m)
        .map(|j| {
            let mut bc = vec![0; names.len()];
            bc[4 * j + 1] = 1;
            bc[4 * j + 2] = 1;
            let mut base = one.clone();
            base.add_term(bc, BigRational::one());
            let mut pw = vec![one.clone()];
            for _ in 0..powers[j] {
                let next = pw.last().unwrap().mul(&base);
                pw.push(next);
            }
            pw
        })
        .collect();
    let mut numerator = IntegerPolynomial::zero(names.clone());
    for (e, c) in tr.terms() {
        let mut mono = e.clone();
        for j in 0..m {
            mono[4 * j] += powers[j] - e[4 * j + 3];
            mono[4 * j + 3] = 0;
        }
        let mut term = IntegerPolynomial::zero(names.clone());
        term.add_term(mono, c.clone());
        for j in 0..m {
            let k = e[4 * j + 3] as usize;
            if k > 0 {
                term = term.mul(&shifted[j][k]);
            }
        }
        numerator = numerator.add(&term);
    }
    Ok(TracePolynomial { numerator, denominator_powers: powers, eliminated: true, degree_bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn small_words() {
        let t = trace_polynomial(&word("a1"), 1, false).unwrap();
        assert_eq!(t.numerator.to_string(), "a1 + d1");
        let t = trace_polynomial(&word("a1 a1"), 1, false).unwrap();
        assert_eq!(t.numerator.to_string(), "a1^2 + 2*b1*c1 + d1^2");
        assert_eq!(t.numerator.degree(), Some(2));
    }

    #[test]
    fn elimination_of_square() {
        // a^2 + 2bc + ((1+bc)/a)^2 = (a^4 + 2a^2 bc + (1+bc)^2) / a^2
        let t = trace_polynomial(&word("a1 a1"), 1, true).unwrap();
        assert_eq!(t.denominator_powers, vec![2]);
        assert_eq!(t.numerator.to_string(), "a1^4 + 2*a1^2*b1*c1 + b1^2*c1^2 + 2*b1*c1 + 1");
        assert!(t.numerator.degree().unwrap() <= t.degree_bound);
        assert_eq!(t.denominator().to_string(), "a1^2");
    }

    #[test]
    fn arity_checked() {
        assert!(trace_polynomial(&word("a3"), 2, false).is_err());
    }
}
