//! Generator tuples, the genus relation, and its repair.

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::Matrix2;
use super::scalar::{Scalar, ScalarKind};
use crate::error::{Error, Result};
use crate::number_theory::RigorousReal;

/// Precision of relation-defect enclosures.
pub const DEFECT_PRECISION: u32 = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    None,
    /// `[A1, A2] ... [A_{2g-1}, A_{2g}] = I`.
    Genus(u32),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorTuple<S> {
    generators: Vec<Matrix2<S>>,
    relation: Relation,
}

/// Max-entry distance of the relation product from the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationDefect {
    pub matrix_distance: RigorousReal,
}

impl<S: Scalar> GeneratorTuple<S> {
    pub fn new(generators: Vec<Matrix2<S>>, relation: Relation) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidInput("a tuple needs at least one generator".into()));
        }
        if !generators.iter().all(|g| g.compatible(&generators[0])) {
            return Err(Error::ScalarMismatch("generators over different fields".into()));
        }
        let t = GeneratorTuple {
            generators,
            relation,
        };
        if let Relation::Genus(g) = relation {
            if g < 2 {
                return Err(Error::InvalidInput(
                    "genus relation needs g >= 2 (no hyperbolic surface of genus 1)".into(),
                ));
            }
            if t.arity() != 2 * g as usize {
                return Err(Error::InvalidInput(format!(
                    "genus {g} needs {} generators, got {}",
                    2 * g,
                    t.arity()
                )));
            }
            let prod = relation_product(&t.generators);
            let ok = if S::EXACT {
                prod.is_identity() == Some(true)
            } else {
                prod.distance_from_identity(DEFECT_PRECISION).contains_zero()
            };
            if !ok {
                return Err(Error::Verification("genus relation does not hold".into()));
            }
        }
        Ok(t)
    }

    pub fn free(generators: Vec<Matrix2<S>>) -> Result<Self> {
        GeneratorTuple::new(generators, Relation::None)
    }

    pub fn generators(&self) -> &[Matrix2<S>] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> &Matrix2<S> {
        &self.generators[i]
    }

    pub fn arity(&self) -> usize {
        self.generators.len()
    }

    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub fn scalar_kind(&self) -> ScalarKind {
        self.generators[0].a.kind()
    }

    /// Certified real version at the given precision; the relation tag is kept.
    pub fn to_real(&self, prec: u32) -> GeneratorTuple<RigorousReal> {
        GeneratorTuple {
            generators: self.generators.iter().map(|g| g.to_real(prec)).collect(),
            relation: self.relation,
        }
    }

    /// A free tuple with generator `i` replaced (relation dropped).
    pub fn with_generator(&self, i: usize, m: Matrix2<S>) -> Result<Self> {
        if i >= self.arity() {
            return Err(Error::Arity {
                index: i + 1,
                arity: self.arity(),
            });
        }
        let mut gens = self.generators.clone();
        gens[i] = m;
        GeneratorTuple::free(gens)
    }
}

/// `[A1, A2][A3, A4]...` over consecutive pairs (a trailing odd generator is ignored).
pub fn relation_product<S: Scalar>(gens: &[Matrix2<S>]) -> Matrix2<S> {
    gens.chunks_exact(2)
        .fold(gens[0].identity(), |acc, p| acc.mul(&p[0].commutator(&p[1])))
}

/// Distance of the genus relation product from the identity.
pub fn relation_defect<S: Scalar>(t: &GeneratorTuple<S>) -> Result<RelationDefect> {
    if !matches!(t.relation(), Relation::Genus(_)) && t.arity() % 2 != 0 {
        return Err(Error::InvalidInput("relation defect needs an even number of generators".into()));
    }
    Ok(RelationDefect {
        matrix_distance: relation_product(t.generators()).distance_from_identity(DEFECT_PRECISION),
    })
}

/// Output of [`relation_repair`].
#[derive(Clone, Debug, PartialEq)]
pub struct RepairOutcome<S> {
    /// `A_{2g-1}`, possibly moved along its conjugacy class to make the relation solvable.
    pub penultimate: Matrix2<S>,
    /// The solved `A_{2g}`.
    pub last: Matrix2<S>,
    pub adjusted: bool,
}

impl<S: Scalar> RepairOutcome<S> {
    /// The completed genus tuple.
    pub fn complete(&self, partial: &[Matrix2<S>]) -> Result<GeneratorTuple<S>> {
        let mut gens = partial.to_vec();
        let n = gens.len();
        gens[n - 1] = self.penultimate.clone();
        gens.push(self.last.clone());
        GeneratorTuple::new(gens, Relation::Genus(((n + 1) / 2) as u32))
    }
}

type Q = BigRational;
type QMat = Matrix2<Q>;

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// Exact rational square root, if any.
fn rational_sqrt(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (x.numer(), x.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (&rn * &rn == *n && &rd * &rd == *d).then(|| Q::new(rn, rd))
}

/// Columns `(v1, v2)` of an eigenbasis for eigenvalues `(l1, l2)`, `l1 != l2`.
fn eigenbasis(c: &QMat, l1: &Q, l2: &Q) -> QMat {
    let vec_for = |l: &Q| -> (Q, Q) {
        if !c.b.is_zero() {
            (c.b.clone(), l - &c.a)
        } else if !c.c.is_zero() {
            (l - &c.d, c.c.clone())
        } else if *l == c.a {
            (q(1), q(0))
        } else {
            (q(0), q(1))
        }
    };
    let (x1, y1) = vec_for(l1);
    let (x2, y2) = vec_for(l2);
    Matrix2::from_entries(x1, x2, y1, y2)
}

fn inv_general(p: &QMat) -> QMat {
    let det = &p.a * &p.d - &p.b * &p.c;
    Matrix2::from_entries(&p.d / &det, -&p.b / &det, -&p.c / &det, &p.a / &det)
}

/// Rational nullspace basis of a matrix given by rows.
fn nullspace(rows: Vec<Vec<Q>>, n: usize) -> Vec<Vec<Q>> {
    let mut m = rows;
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Q::one() / &m[r][col];
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..n {
                    let v = &f * &m[r][j];
                    m[i][j] -= v;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); n];
            v[f] = Q::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[i][f].clone();
            }
            v
        })
        .collect()
}

/// Solutions of `M X = X C` as a basis of 2×2 matrices.
fn sylvester_kernel(m: &QMat, c: &QMat) -> Vec<QMat> {
    // X = (x0 x1; x2 x3); (MX - XC) entries are linear in x
    let (ma, mb, mc, md) = (&m.a, &m.b, &m.c, &m.d);
    let (ca, cb, cc, cd) = (&c.a, &c.b, &c.c, &c.d);
    let rows = vec![
        vec![ma - ca, -cc.clone(), mb.clone(), q(0)],
        vec![-cb.clone(), ma - cd, q(0), mb.clone()],
        vec![mc.clone(), q(0), md - ca, -cc.clone()],
        vec![q(0), mc.clone(), -cb.clone(), md - cd],
    ];
    nullspace(rows, 4)
        .into_iter()
        .map(|v| Matrix2::from_entries(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()))
        .collect()
}

fn det_q(x: &QMat) -> Q {
    &x.a * &x.d - &x.b * &x.c
}

fn max_abs_entry(x: &QMat) -> Q {
    x.entries().iter().map(|e| e.abs()).max().unwrap()
}

/// Continued-fraction convergents of a positive `f64` with denominators up to `max_den`.
fn convergents(x: f64, max_den: i64) -> Vec<Q> {
    let mut out = Vec::new();
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut v = x;
    for _ in 0..20 {
        let a = v.floor();
        if !a.is_finite() || a.abs() > 1e12 {
            break;
        }
        let a = a as i64;
        let h = a.saturating_mul(h1).saturating_add(h0);
        let k = a.saturating_mul(k1).saturating_add(k0);
        if k > max_den || k <= 0 {
            break;
        }
        if h > 0 {
            out.push(Q::new(h.into(), k.into()));
        }
        (h0, h1, k0, k1) = (h1, h, k1, k);
        let frac = v - a as f64;
        if frac.abs() < 1e-12 {
            break;
        }
        v = 1.0 / frac;
    }
    if out.is_empty() {
        out.push(q(1));
    }
    out
}

fn normalize_sign(x: QMat) -> QMat {
    let tr = &x.a + &x.d;
    if tr.is_negative() || (tr.is_zero() && x.a.is_negative()) {
        x.neg()
    } else {
        x
    }
}

/// Solves `[A1,A2]...[A_{2g-3},A_{2g-2}] A_{2g-1} X A_{2g-1}^{-1} = X` for `X = A_{2g}`.
///
/// Writing `B` for the leading commutator product and `C = A_{2g-1}`, the relation
/// reads `(BC) X = X C`. Non-zero solutions exist only when `tr(BC) = tr(C)`; `C`
/// is first moved along its conjugacy class (fixing one eigenvector) to meet
/// this linear condition. The solutions then form `X0 (sI + tC)`, and `det X = 1`
/// is a conic in `(s, t)` that splits over Q when `C` has rational eigenvalues.
/// Among the rational solutions, one with small entries is chosen, preferring
/// hyperbolic ones, with sign fixed so that the trace (then the (1,1) entry) is
/// positive.
pub fn relation_repair<S: Scalar>(partial: &[Matrix2<S>]) -> Result<RepairOutcome<S>> {
    if partial.len() < 3 || partial.len() % 2 == 0 {
        return Err(Error::InvalidInput(format!(
            "relation repair needs 2g - 1 >= 3 generators, got {}",
            partial.len()
        )));
    }
    if !S::EXACT {
        return Err(Error::UnsupportedScalar("relation repair needs exact scalars".into()));
    }
    let to_q = |m: &Matrix2<S>| -> Result<QMat> {
        let e = |s: &S| {
            s.as_rational()
                .ok_or_else(|| Error::UnsupportedScalar("relation repair needs rational entries".into()))
        };
        Ok(Matrix2::from_entries(e(&m.a)?, e(&m.b)?, e(&m.c)?, e(&m.d)?))
    };
    let qs: Vec<QMat> = partial.iter().map(to_q).collect::<Result<_>>()?;
    let n = qs.len();
    let b = relation_product(&qs[..n - 1]);
    let c = qs[n - 1].clone();
    let ident = c.identity();
    if c == ident || c == ident.neg() {
        return Err(Error::DegenerateSolution(
            "penultimate generator is ±I, every X solves".into(),
        ));
    }
    if b == ident {
        return Err(Error::DegenerateSolution(
            "commutator product is I, every X commuting with the penultimate generator solves".into(),
        ));
    }
    let tau = c.trace();
    let disc = &tau * &tau - q(4);
    let eig = rational_sqrt(&disc).filter(|r| !r.is_zero());

    let (c_adj, lambda) = match eig {
        Some(r) => {
            let l1 = (&tau + &r) / q(2);
            let l2 = (&tau - &r) / q(2);
            let p = eigenbasis(&c, &l1, &l2);
            let pinv = inv_general(&p);
            let bp = pinv.mul(&b).mul(&p);
            // C(κ) = P T P^-1 with T triangular and κ the off-diagonal entry
            let base = &bp.a * &l1 + &bp.d * &l2 - &l1 - &l2;
            let t = if !bp.c.is_zero() {
                let kappa = -&base / &bp.c;
                Matrix2::from_entries(l1.clone(), kappa, q(0), l2.clone())
            } else if !bp.b.is_zero() {
                let kappa = -&base / &bp.b;
                Matrix2::from_entries(l1.clone(), q(0), kappa, l2.clone())
            } else {
                return Err(Error::NoRationalSolution);
            };
            (p.mul(&t).mul(&pinv), Some(l1))
        }
        None => {
            if b.mul(&c).trace() != tau {
                return Err(Error::NoRationalSolution);
            }
            (c.clone(), None)
        }
    };

    let m = b.mul(&c_adj);
    let kernel = sylvester_kernel(&m, &c_adj);
    if kernel.len() != 2 {
        return Err(Error::DegenerateSolution(format!(
            "solution space has dimension {}",
            kernel.len()
        )));
    }
    let x0 = [q(0), q(1), q(2), q(3)]
        .iter()
        .map(|k| {
            let s = |x: &Q, y: &Q| x + k * y;
            Matrix2::from_entries(
                s(&kernel[0].a, &kernel[1].a),
                s(&kernel[0].b, &kernel[1].b),
                s(&kernel[0].c, &kernel[1].c),
                s(&kernel[0].d, &kernel[1].d),
            )
        })
        .chain(std::iter::once(kernel[1].clone()))
        .find(|x| !det_q(x).is_zero())
        .ok_or(Error::NoRealSolution)?;
    let delta = det_q(&x0);
    let target = Q::one() / &delta;

    let combine = |s: &Q, t: &Q| -> QMat {
        let inner = Matrix2::from_entries(
            s + t * &c_adj.a,
            t * &c_adj.b,
            t * &c_adj.c,
            s + t * &c_adj.d,
        );
        x0.mul(&inner)
    };

    let mut candidates: Vec<QMat> = Vec::new();
    match lambda {
        Some(l) => {
            let mu = Q::one() / &l;
            let mag = target.abs().to_f64().unwrap_or(1.0).sqrt();
            for u in convergents(mag, 1000) {
                // u v = 1/δ with u = s + λt, v = s + t/λ
                let v = &target / &u;
                let t = (&u - &v) / (&l - &mu);
                let s = &u - &l * &t;
                candidates.push(combine(&s, &t));
            }
        }
        None => {
            // small integer search for δ q(s, t) a rational square
            for s in -12i64..=12 {
                for t in -12i64..=12 {
                    let (sq, tq) = (q(s), q(t));
                    let form = &sq * &sq + &tau * &sq * &tq + &tq * &tq;
                    if let Some(r) = rational_sqrt(&(&form * &delta)).filter(|r| !r.is_zero()) {
                        candidates.push(combine(&(&sq / &r), &(&tq / &r)));
                    }
                }
            }
        }
    }
    let best = candidates
        .into_iter()
        .filter(|x| det_q(x).is_one())
        .map(normalize_sign)
        .min_by(|x, y| {
            let hx = !x.is_hyperbolic();
            let hy = !y.is_hyperbolic();
            hx.cmp(&hy).then(max_abs_entry(x).cmp(&max_abs_entry(y)))
        })
        .ok_or(Error::NoRationalSolution)?;

    let back = |m: &QMat| -> Matrix2<S> {
        let s = &partial[0].a;
        Matrix2::from_entries(
            s.rational_like(&m.a),
            s.rational_like(&m.b),
            s.rational_like(&m.c),
            s.rational_like(&m.d),
        )
    };
    Ok(RepairOutcome {
        adjusted: c_adj != c,
        penultimate: back(&c_adj),
        last: back(&best),
    })
}
