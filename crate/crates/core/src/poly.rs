//! Sparse polynomials in the dual-basis variables.
//!
//! Variables 0..4 are the binary column classes and 4..9 the ternary ones,
//! both in [`Pattern`](crate::codes::Pattern) order. The empty-code case only
//! uses the "equal" (`{123}`) and "unequal" (`{12|3}`) slots of each block.

use crate::codes::Pattern;
use crate::scalar::Coeff;
use std::collections::BTreeMap;
use std::fmt;

pub const NUM_VARS: usize = 9;
pub const TERNARY_OFFSET: usize = 4;

/// Exponent vector over the nine dual variables.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DualMonomial(pub [u16; NUM_VARS]);

impl DualMonomial {
    pub fn one() -> Self {
        DualMonomial([0; NUM_VARS])
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0; NUM_VARS];
        e[i] = 1;
        DualMonomial(e)
    }

    pub fn binary(&self) -> [u16; 4] {
        [self.0[0], self.0[1], self.0[2], self.0[3]]
    }

    pub fn ternary(&self) -> [u16; 5] {
        let e = &self.0[TERNARY_OFFSET..];
        [e[0], e[1], e[2], e[3], e[4]]
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    fn mul(&self, other: &Self) -> Self {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a += b;
        }
        DualMonomial(e)
    }
}

/// Name of a dual variable in the `c*` (binary) / `d*` (ternary) notation.
pub fn var_name(i: usize) -> String {
    let (prefix, p) =
        if i < TERNARY_OFFSET { ("c*", Pattern::BINARY[i]) } else { ("d*", Pattern::TERNARY[i - TERNARY_OFFSET]) };
    let label = match p {
        Pattern::All => "123",
        Pattern::P12_3 => "12,3",
        Pattern::P13_2 => "13,2",
        Pattern::P1_23 => "1,23",
        Pattern::Distinct => "1,2,3",
    };
    format!("{prefix}{{{label}}}")
}

/// Sparse polynomial with no stored zero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct DualPoly<C> {
    terms: BTreeMap<DualMonomial, C>,
}

impl<C: Coeff> DualPoly<C> {
    pub fn zero() -> Self {
        DualPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(DualMonomial::one(), C::one())
    }

    pub fn monomial(m: DualMonomial, c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn var(i: usize) -> Self {
        Self::monomial(DualMonomial::var(i), C::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &DualMonomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DualMonomial, &C)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: DualMonomial, c: C) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-C::one()))
    }

    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        DualPoly { terms: self.terms.iter().map(|(m, c)| (*m, c.clone() * k.clone())).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Value with every variable set to 1.
    pub fn sum_of_coefficients(&self) -> C {
        self.terms.values().cloned().fold(C::zero(), |a, b| a + b)
    }
}

impl<C: Coeff> fmt::Display for DualPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*{}", var_name(i))?,
                    _ => write!(f, "*{}^{e}", var_name(i))?,
                }
            }
        }
        Ok(())
    }
}
