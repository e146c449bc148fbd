//! Non-commutative ElGamal key exchange, in the conjugacy-search and the
//! power-conjugacy-search variants. `S` and `T` are subgroups generated by
//! generator index sets whose elements commute.

use rand::Rng;
use serde::Serialize;

use super::{check_commuting, ProtocolError};
use crate::int::Int;
use crate::oracles::{csp_enumerate, SearchBudget};
use crate::pc::{collect, random_element, random_element_over, GroupElement};
use crate::platform::PlatformGroup;
use crate::rng::SeededRng;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CspTranscript {
    /// Bob's public key `<b, c>` with `c = b^s`.
    pub b: GroupElement,
    pub c: GroupElement,
    /// Alice's message `<h, E>` with `h = b^t`, `E = x^(c^t)`.
    pub h: GroupElement,
    pub e: GroupElement,
    #[serde(skip)]
    pub s: GroupElement,
    #[serde(skip)]
    pub t: GroupElement,
    #[serde(skip)]
    pub x: GroupElement,
}

impl CspTranscript {
    /// Bob's decryption: `x = E^((h^s)^-1)`, using `h^s = c^t`.
    pub fn recover(&self) -> Result<GroupElement, ProtocolError> {
        let ct = self.h.conjugate(&self.s)?;
        Ok(self.e.conjugate(&ct.inv()?)?)
    }

    /// True iff Bob's recovered secret is the one Alice chose.
    pub fn check(&self) -> Result<bool, ProtocolError> {
        Ok(self.recover()? == self.x)
    }
}

pub fn elgamal_csp_session(
    b: &GroupElement,
    s: &GroupElement,
    t: &GroupElement,
    x: &GroupElement,
) -> Result<CspTranscript, ProtocolError> {
    let c = b.conjugate(s)?;
    let h = b.conjugate(t)?;
    let e = x.conjugate(&c.conjugate(t)?)?;
    Ok(CspTranscript {
        b: b.clone(),
        c,
        h,
        e,
        s: s.clone(),
        t: t.clone(),
        x: x.clone(),
    })
}

pub fn elgamal_csp(
    g: &PlatformGroup,
    s_gens: &[usize],
    t_gens: &[usize],
    rng: &mut SeededRng,
) -> Result<CspTranscript, ProtocolError> {
    let p = g.presentation();
    check_commuting(p, s_gens, t_gens)?;
    let (_, s) = random_element_over(p, s_gens, 2, 6, rng)?;
    let (_, b) = random_element(p, 4, 8, rng)?;
    let (_, x) = random_element(p, 4, 8, rng)?;
    let (_, t) = random_element_over(p, t_gens, 2, 6, rng)?;
    let tr = elgamal_csp_session(&b, &s, &t, &x)?;
    if !tr.check()? {
        return Err(ProtocolError::AgreementFailure("recovered x differs".into()));
    }
    Ok(tr)
}

/// Word-length and exponent ranges for the power variant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PowerParams {
    pub max_exponent: i64,
    pub secret_len: usize,
    pub key_len: usize,
    pub budget: SearchBudget,
}

impl Default for PowerParams {
    fn default() -> Self {
        PowerParams {
            max_exponent: 3,
            secret_len: 2,
            key_len: 3,
            budget: SearchBudget {
                max_nodes: 100_000,
                max_radius: 3,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerTranscript {
    pub g: GroupElement,
    /// Bob's public key `<v, w>` with `v = g^n` and `w = s^-1 g s`.
    pub v: GroupElement,
    pub w: GroupElement,
    /// Alice's message: `h = t^-1 w^m t`, `E = x^-1 t^-1 v^m t x`.
    pub h: GroupElement,
    pub e: GroupElement,
    /// Bob's `E' = s h^n s^-1`.
    pub e_prime: GroupElement,
    /// Bob's solution of `x'^-1 E' x' = E`.
    pub x_recovered: GroupElement,
    #[serde(skip)]
    pub s: GroupElement,
    #[serde(skip)]
    pub n: i64,
    #[serde(skip)]
    pub t: GroupElement,
    #[serde(skip)]
    pub m: i64,
    #[serde(skip)]
    pub x: GroupElement,
}

impl PowerTranscript {
    /// `E' = t^-1 v^m t`, the identity Bob relies on.
    pub fn identity_holds(&self) -> Result<bool, ProtocolError> {
        let rhs = self.v.pow(&Int::from(self.m))?.conjugate(&self.t)?;
        Ok(self.e_prime == rhs)
    }

    /// Both sides agree on the conjugation they derive: `x' x^-1`
    /// centralizes `E'`, so `E'^x' = E'^x = E`.
    pub fn check(&self) -> Result<bool, ProtocolError> {
        let d = self.x_recovered.mul(&self.x.inv()?)?;
        Ok(self.identity_holds()?
            && self.e_prime.commutator(&d)?.is_identity()
            && self.e_prime.conjugate(&self.x_recovered)? == self.e)
    }
}

/// One session with all secrets supplied; Bob recovers `x'` with the
/// enumeration oracle.
#[allow(clippy::too_many_arguments)]
pub fn elgamal_power_session(
    g: &PlatformGroup,
    base: &GroupElement,
    s: &GroupElement,
    n: i64,
    t: &GroupElement,
    m: i64,
    x: &GroupElement,
    budget: SearchBudget,
) -> Result<PowerTranscript, ProtocolError> {
    let v = base.pow(&Int::from(n))?;
    let w = base.conjugate(s)?;
    let h = w.pow(&Int::from(m))?.conjugate(t)?;
    let e = v.pow(&Int::from(m))?.conjugate(t)?.conjugate(x)?;

    let s_inv = s.inv()?;
    let e_prime = s.mul(&h.pow(&Int::from(n))?)?.mul(&s_inv)?;
    let res = csp_enumerate(g, &[(e_prime.clone(), e.clone())], budget)?;
    let word = res.found().ok_or(ProtocolError::SolverExhausted)?;
    let x_recovered = collect(g.presentation(), word)?;
    let tr = PowerTranscript {
        g: base.clone(),
        v,
        w,
        h,
        e,
        e_prime,
        x_recovered,
        s: s.clone(),
        n,
        t: t.clone(),
        m,
        x: x.clone(),
    };
    if !tr.identity_holds()? {
        return Err(ProtocolError::AgreementFailure("s h^n s^-1 != t^-1 v^m t".into()));
    }
    Ok(tr)
}

pub fn elgamal_power(
    g: &PlatformGroup,
    s_gens: &[usize],
    t_gens: &[usize],
    params: PowerParams,
    rng: &mut SeededRng,
) -> Result<PowerTranscript, ProtocolError> {
    let p = g.presentation();
    check_commuting(p, s_gens, t_gens)?;
    let exponent = |rng: &mut SeededRng| {
        let e = rng.gen_range(1..=params.max_exponent);
        if rng.gen_bool(0.5) {
            e
        } else {
            -e
        }
    };
    let (_, base) = random_element(p, 1, params.key_len, rng)?;
    let (_, s) = random_element_over(p, s_gens, 1, params.key_len, rng)?;
    let n = exponent(rng);
    let (_, t) = random_element_over(p, t_gens, 1, params.key_len, rng)?;
    let m = exponent(rng);
    let (_, x) = random_element(p, 0, params.secret_len, rng)?;
    elgamal_power_session(g, &base, &s, n, &t, m, &x, params.budget)
}
