//! Secret sharing over small-cancellation groups. Each participant gets a
//! private C'(1/6) relator set; share bits travel as words that are trivial
//! (bit 1) or nontrivial (bit 0) in that participant's group.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ProtocolError;
use crate::rng::SeededRng;
use crate::smallcanc::{encode_bit, generate_relator_set, ShareBundle, SmallCancPresentation};

/// Relator-set shape used for participants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelatorShape {
    pub alphabet: usize,
    pub count: usize,
    pub min_len: usize,
}

impl Default for RelatorShape {
    fn default() -> Self {
        RelatorShape {
            alphabet: 5,
            count: 2,
            min_len: 24,
        }
    }
}

fn encode_bits(
    participant: usize,
    bits: &[bool],
    shape: RelatorShape,
    rng: &mut SeededRng,
) -> Result<ShareBundle, ProtocolError> {
    let presentation = generate_relator_set(shape.alphabet, shape.count, shape.min_len, rng)?;
    let codewords = bits
        .iter()
        .map(|&b| encode_bit(&presentation, b, rng))
        .collect::<Result<_, _>>()?;
    Ok(ShareBundle {
        participant,
        presentation,
        codewords,
    })
}

/// `n` random bit vectors whose XOR is `secret`.
pub fn split_xor(secret: &[bool], n: usize, rng: &mut SeededRng) -> Vec<Vec<bool>> {
    let mut parts: Vec<Vec<bool>> = (0..n.saturating_sub(1))
        .map(|_| secret.iter().map(|_| rng.gen_bool(0.5)).collect())
        .collect();
    let last = secret
        .iter()
        .enumerate()
        .map(|(k, &c)| parts.iter().fold(c, |acc, p| acc ^ p[k]))
        .collect();
    parts.push(last);
    parts
}

pub fn xor_all(parts: &[Vec<bool>]) -> Vec<bool> {
    let k = parts.first().map_or(0, Vec::len);
    (0..k).map(|i| parts.iter().fold(false, |acc, p| acc ^ p[i])).collect()
}

/// (n,n) scheme: the secret is the XOR of all participants' bit vectors.
pub fn ss_deal_nn(
    secret: &[bool],
    n: usize,
    shape: RelatorShape,
    rng: &mut SeededRng,
) -> Result<Vec<ShareBundle>, ProtocolError> {
    if n < 2 {
        return Err(ProtocolError::BadParams("(n,n) sharing needs n >= 2".into()));
    }
    split_xor(secret, n, rng)
        .iter()
        .enumerate()
        .map(|(j, bits)| encode_bits(j + 1, bits, shape, rng))
        .collect()
}

pub fn ss_reconstruct_nn(bundles: &[ShareBundle], n: usize) -> Result<Vec<bool>, ProtocolError> {
    if bundles.len() < n {
        return Err(ProtocolError::InsufficientShares {
            have: bundles.len(),
            need: n,
        });
    }
    let parts = bundles
        .iter()
        .map(ShareBundle::decode)
        .collect::<Result<Vec<_>, _>>()?;
    if parts.iter().any(|p| p.len() != parts[0].len()) {
        return Err(ProtocolError::BadParams("shares have different lengths".into()));
    }
    Ok(xor_all(&parts))
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// `f(x)` for coefficients `c_0 + c_1 x + ...` over `Z_p`.
pub fn poly_eval(coeffs: &[u64], x: u64, p: u64) -> u64 {
    coeffs.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, p) + c) % p)
}

/// Lagrange interpolation of the points at 0 over `Z_p`.
pub fn lagrange_at_zero(points: &[(u64, u64)], p: u64) -> u64 {
    let mut acc = 0;
    for (i, &(xi, yi)) in points.iter().enumerate() {
        let (mut num, mut den) = (1, 1);
        for (j, &(xj, _)) in points.iter().enumerate() {
            if i != j {
                num = mul_mod(num, xj % p, p);
                den = mul_mod(den, (xj + p - xi % p) % p, p);
            }
        }
        let li = mul_mod(num, pow_mod(den, p - 2, p), p);
        acc = (acc + mul_mod(yi % p, li, p)) % p;
    }
    acc
}

/// Bits needed for values below `p`.
pub fn share_bits(p: u64) -> usize {
    (64 - (p - 1).leading_zeros()).max(1) as usize
}

fn to_bits(y: u64, k: usize) -> Vec<bool> {
    (0..k).map(|i| (y >> i) & 1 == 1).collect()
}

fn from_bits(bits: &[bool]) -> u64 {
    bits.iter().rev().fold(0, |acc, &b| (acc << 1) | u64::from(b))
}

/// (t,n) scheme: Shamir shares `y_j = f(j)`, each sent bitwise (least
/// significant first) through participant `j`'s group.
pub fn ss_deal_tn(
    secret: u64,
    p: u64,
    t: usize,
    n: usize,
    shape: RelatorShape,
    rng: &mut SeededRng,
) -> Result<Vec<ShareBundle>, ProtocolError> {
    if !is_prime(p) {
        return Err(ProtocolError::BadParams(format!("{p} is not prime")));
    }
    if t == 0 || t > n || n as u64 >= p {
        return Err(ProtocolError::BadParams(format!("need 1 <= t <= n < p, got t={t} n={n} p={p}")));
    }
    if secret >= p {
        return Err(ProtocolError::BadParams(format!("secret {secret} is not below p = {p}")));
    }
    let mut coeffs = vec![secret];
    coeffs.extend((1..t).map(|_| rng.gen_range(0..p)));
    let k = share_bits(p);
    (1..=n)
        .map(|j| {
            let y = poly_eval(&coeffs, j as u64, p);
            encode_bits(j, &to_bits(y, k), shape, rng)
        })
        .collect()
}

pub fn ss_reconstruct_tn(bundles: &[ShareBundle], t: usize, p: u64) -> Result<u64, ProtocolError> {
    if bundles.len() < t || t == 0 {
        return Err(ProtocolError::InsufficientShares {
            have: bundles.len(),
            need: t.max(1),
        });
    }
    let points = bundles[..t]
        .iter()
        .map(|b| Ok((b.participant as u64, from_bits(&b.decode()?))))
        .collect::<Result<Vec<_>, ProtocolError>>()?;
    Ok(lagrange_at_zero(&points, p))
}

/// Participant relator file content, one relator per line.
pub fn presentation_text(p: &SmallCancPresentation) -> String {
    p.to_text()
}
