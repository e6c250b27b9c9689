//! Dense polynomials in `T` over `Z[x, x^-1]`.

use std::ops::{Add, AddAssign};

use crate::vpoly::LaurentPoly;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub(crate) struct TPoly(pub(crate) Vec<LaurentPoly>);

impl TPoly {
    pub fn monomial(c: LaurentPoly, k: usize) -> Self {
        let mut v = vec![LaurentPoly::zero(); k + 1];
        v[k] = c;
        let mut p = Self(v);
        p.trim();
        p
    }

    pub fn trim(&mut self) {
        while self.0.last().is_some_and(LaurentPoly::is_zero) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(LaurentPoly::is_zero)
    }

    /// `self * (1 - x^e T^b)`.
    pub fn mul_factor(&self, e: i64, b: usize) -> Self {
        let mut out = vec![LaurentPoly::zero(); self.0.len() + b];
        for (k, c) in self.0.iter().enumerate() {
            out[k] += c;
            out[k + b] -= &c.shift(e);
        }
        let mut p = Self(out);
        p.trim();
        p
    }

    /// Exact quotient by `1 - x^e T^b`, if it divides.
    pub fn div_factor(&self, e: i64, b: usize) -> Option<Self> {
        let mut rem = self.0.clone();
        let n = rem.len();
        if n == 0 {
            return Some(Self::default());
        }
        if n <= b {
            return None;
        }
        let mut quot = vec![LaurentPoly::zero(); n - b];
        // leading term of the divisor is -x^e T^b, a unit
        for k in (b..n).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let q = -rem[k].shift(-e);
            rem[k] = LaurentPoly::zero();
            rem[k - b] -= &q;
            quot[k - b] = q;
        }
        if rem[..b].iter().all(LaurentPoly::is_zero) {
            let mut p = Self(quot);
            p.trim();
            Some(p)
        } else {
            None
        }
    }

    /// Divides by `T - x^r`; returns quotient and remainder `self(x^r)`.
    pub fn synthetic_div(&self, r: i64) -> (Self, LaurentPoly) {
        let n = self.0.len();
        if n == 0 {
            return (Self::default(), LaurentPoly::zero());
        }
        let mut quot = vec![LaurentPoly::zero(); n - 1];
        let mut carry = LaurentPoly::zero();
        for k in (0..n).rev() {
            let val = &self.0[k] + &carry.shift(r);
            if k == 0 {
                carry = val;
            } else {
                quot[k - 1] = val.clone();
                carry = val;
            }
        }
        let mut q = Self(quot);
        q.trim();
        (q, carry)
    }

    /// Multiplicity of `T = x^r` as a root; the zero polynomial has none.
    pub fn root_multiplicity(&self, r: i64) -> (u32, Self) {
        let mut cur = self.clone();
        let mut m = 0;
        if cur.is_zero() {
            return (0, cur);
        }
        loop {
            let (q, rem) = cur.synthetic_div(r);
            if !rem.is_zero() {
                return (m, cur);
            }
            m += 1;
            cur = q;
        }
    }

    pub fn eval_monomial(&self, r: i64) -> LaurentPoly {
        self.synthetic_div(r).1
    }

}

impl AddAssign<&TPoly> for TPoly {
    fn add_assign(&mut self, rhs: &TPoly) {
        if self.0.len() < rhs.0.len() {
            self.0.resize(rhs.0.len(), LaurentPoly::zero());
        }
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a += b;
        }
        self.trim();
    }
}

impl Add<&TPoly> for &TPoly {
    type Output = TPoly;
    fn add(self, rhs: &TPoly) -> TPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}
