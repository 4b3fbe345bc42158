//! Exact arithmetic in Z[theta], theta = 2cos(pi/N).
//!
//! Every bond label m of a system divides N, so all inner products of simple
//! roots live in this ring and root coordinates stay integral. Signs are
//! decided by interval bisection against the minimal polynomial; no floats
//! reach any decision.

use crate::error::{CoxError, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Ring element: polynomial in theta of degree < ctx.degree, coefficients
/// listed from the constant term up. Length always equals ctx.degree.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Rg(pub Vec<BigInt>);

pub struct RingCtx {
    pub n: u32,
    /// Minimal polynomial of theta, monic, constant term first.
    psi: Vec<BigInt>,
    pub degree: usize,
    lo: BigRational,
    hi: BigRational,
}

const MAX_N: u32 = 1000;

impl RingCtx {
    /// `n` is the lcm of the finite bond labels (>= 2).
    pub fn new(n: u32) -> Result<RingCtx> {
        if !(2..=MAX_N).contains(&n) {
            return Err(CoxError::InvalidSystem(format!(
                "bond labels produce lcm {n}, outside supported range 2..={MAX_N}"
            )));
        }
        let psi = min_poly_two_cos(n);
        let degree = psi.len() - 1;
        debug_assert!(psi[degree].is_one());
        let (lo, hi) = isolate_largest_root(&psi, n)?;
        Ok(RingCtx { n, psi, degree, lo, hi })
    }

    pub fn zero(&self) -> Rg {
        Rg(vec![BigInt::zero(); self.degree])
    }

    pub fn one(&self) -> Rg {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i64) -> Rg {
        let mut c = vec![BigInt::zero(); self.degree];
        c[0] = BigInt::from(v);
        Rg(c)
    }

    pub fn theta(&self) -> Rg {
        if self.degree == 1 {
            // psi = y - a, so theta == a.
            Rg(vec![-self.psi[0].clone()])
        } else {
            let mut c = vec![BigInt::zero(); self.degree];
            c[1] = BigInt::one();
            Rg(c)
        }
    }

    /// 2cos(k*pi/N) as a ring element.
    pub fn two_cos(&self, k: u32) -> Rg {
        let mut prev = self.from_int(2);
        if k == 0 {
            return prev;
        }
        let th = self.theta();
        let mut cur = th.clone();
        for _ in 1..k {
            let next = self.sub(&self.mul(&th, &cur), &prev);
            prev = cur;
            cur = next;
        }
        cur
    }

    pub fn add(&self, a: &Rg, b: &Rg) -> Rg {
        Rg(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, a: &Rg, b: &Rg) -> Rg {
        Rg(a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect())
    }

    pub fn neg(&self, a: &Rg) -> Rg {
        Rg(a.0.iter().map(|x| -x).collect())
    }

    pub fn mul_int(&self, a: &Rg, k: i64) -> Rg {
        let k = BigInt::from(k);
        Rg(a.0.iter().map(|x| x * &k).collect())
    }

    pub fn mul(&self, a: &Rg, b: &Rg) -> Rg {
        let d = self.degree;
        if d == 1 {
            return Rg(vec![&a.0[0] * &b.0[0]]);
        }
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        // Reduce mod psi (monic).
        for t in (d..prod.len()).rev() {
            if prod[t].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut prod[t]);
            for (k, pk) in self.psi.iter().enumerate().take(d) {
                let delta = &c * pk;
                prod[t - d + k] -= delta;
            }
        }
        prod.truncate(d);
        Rg(prod)
    }

    pub fn is_zero(a: &Rg) -> bool {
        a.0.iter().all(|c| c.is_zero())
    }

    /// Sign of a evaluated at theta: -1, 0, or 1. Exact.
    pub fn sign(&self, a: &Rg) -> i32 {
        if Self::is_zero(a) {
            return 0;
        }
        if self.degree == 1 {
            return sign_big(&a.0[0]);
        }
        // Nonzero polynomials of degree < deg(psi) cannot vanish at theta,
        // so the bisection below terminates.
        let mut lo = self.lo.clone();
        let mut hi = self.hi.clone();
        loop {
            let (vlo, vhi) = eval_interval(&a.0, &lo, &hi);
            if vlo.is_positive() {
                return 1;
            }
            if vhi.is_negative() {
                return -1;
            }
            let mid = (&lo + &hi) / BigRational::from_integer(2.into());
            // theta is the largest real root of psi and psi is monic, so
            // psi > 0 strictly to the right of theta and < 0 just left of it.
            if eval_rational(&self.psi, &mid).is_positive() {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }

    pub fn psi_coeffs(&self) -> &[BigInt] {
        &self.psi
    }
}

fn sign_big(x: &BigInt) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

fn eval_rational(poly: &[BigInt], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in poly.iter().rev() {
        acc = acc * x + BigRational::from_integer(c.clone());
    }
    acc
}

/// Interval Horner evaluation: returns rationals (lo, hi) bracketing the
/// value of the polynomial over [xlo, xhi].
fn eval_interval(poly: &[BigInt], xlo: &BigRational, xhi: &BigRational) -> (BigRational, BigRational) {
    let mut alo = BigRational::zero();
    let mut ahi = BigRational::zero();
    for c in poly.iter().rev() {
        let cands = [&alo * xlo, &alo * xhi, &ahi * xlo, &ahi * xhi];
        let mut mn = cands[0].clone();
        let mut mx = cands[0].clone();
        for v in &cands[1..] {
            if *v < mn {
                mn = v.clone();
            }
            if *v > mx {
                mx = v.clone();
            }
        }
        let cr = BigRational::from_integer(c.clone());
        alo = mn + &cr;
        ahi = mx + cr;
    }
    (alo, ahi)
}

/// Minimal polynomial of 2cos(pi/N) over Q, monic with integer coefficients,
/// constant term first. Obtained by folding the cyclotomic polynomial
/// Phi_{2N}(x) through y = x + 1/x.
fn min_poly_two_cos(n: u32) -> Vec<BigInt> {
    let phi = cyclotomic(2 * n);
    let deg = phi.len() - 1;
    debug_assert!(deg % 2 == 0, "Phi_{{2N}} has even degree for N >= 2");
    let half = deg / 2;
    // Phi/x^half = c_half + sum_{k>=1} c_{half+k} (x^k + x^-k); substitute
    // x^k + x^-k = p_k(y) with p_0 = 2, p_1 = y, p_{k+1} = y p_k - p_{k-1}.
    let mut psi = vec![BigInt::zero(); half + 1];
    psi[0] = phi[half].clone();
    let mut p_prev: Vec<BigInt> = vec![BigInt::from(2)];
    let mut p_cur: Vec<BigInt> = vec![BigInt::zero(), BigInt::one()];
    for k in 1..=half {
        for (i, c) in p_cur.iter().enumerate() {
            psi[i] += &phi[half + k] * c;
        }
        if k < half {
            // p_next = y * p_cur - p_prev
            let mut next = vec![BigInt::zero(); p_cur.len() + 1];
            for (i, c) in p_cur.iter().enumerate() {
                next[i + 1] = c.clone();
            }
            for (i, c) in p_prev.iter().enumerate() {
                next[i] -= c;
            }
            p_prev = p_cur;
            p_cur = next;
        }
    }
    debug_assert!(psi[half].is_one());
    psi
}

/// Dense cyclotomic polynomial Phi_n, constant term first.
fn cyclotomic(n: u32) -> Vec<BigInt> {
    // x^n - 1 divided by the product of Phi_d over proper divisors d of n.
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let phid = cyclotomic(d);
            num = poly_div_exact(&num, &phid);
        }
    }
    num
}

/// Exact division of polynomials with integer coefficients (monic divisor).
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    debug_assert!(den[dd].is_one());
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); dn - dd + 1];
    for t in (dd..=dn).rev() {
        let c = std::mem::take(&mut rem[t]);
        if c.is_zero() {
            continue;
        }
        for (k, dk) in den.iter().enumerate().take(dd) {
            let delta = &c * dk;
            rem[t - dd + k] -= delta;
        }
        quot[t - dd] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()), "division not exact");
    quot
}

/// Rational interval (lo, hi) containing 2cos(pi/N) and no other root of psi,
/// with psi(lo) < 0 < psi(hi).
fn isolate_largest_root(psi: &[BigInt], n: u32) -> Result<(BigRational, BigRational)> {
    let seed = 2.0 * (std::f64::consts::PI / n as f64).cos();
    let center = BigRational::from_float(seed)
        .ok_or_else(|| CoxError::InvalidSystem("cannot seed root isolation".into()))?;
    let mut k = 20u32;
    loop {
        let eps = BigRational::new(BigInt::one(), BigInt::from(2u64).pow(k));
        let lo = &center - &eps;
        let hi = &center + &eps;
        let vlo = eval_rational(psi, &lo);
        let vhi = eval_rational(psi, &hi);
        if vlo.is_negative() && vhi.is_positive() {
            return Ok((lo, hi));
        }
        k += 4;
        if k > 200 {
            return Err(CoxError::InvalidSystem(format!(
                "failed to isolate 2cos(pi/{n})"
            )));
        }
    }
}
