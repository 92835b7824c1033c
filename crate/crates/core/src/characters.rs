//! Dirichlet characters modulo `N`.
//!
//! `(Z/NZ)^x` is split by CRT into prime-power components. Each component has
//! fixed generators: the smallest primitive root for odd `p^e`, `-1` for `4`,
//! and the pair `(-1, 5)` for `2^e` with `e >= 3`. A character is an exponent
//! vector against these generators and evaluates to an exact [`RationalAngle`].

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::modular::{factorize, gcd, lcm, pow_mod, residue};
use crate::roots::RationalAngle;

#[derive(Debug)]
struct Component {
    modulus: u64,
    /// Generator orders; the logs in `logs` are against these generators.
    orders: Vec<u64>,
    /// Discrete logs per residue; `None` for non-units.
    logs: Vec<Option<[u32; 2]>>,
}

impl Component {
    fn new(p: u64, e: u32) -> Component {
        let pe = p.pow(e);
        let mut logs = vec![None; pe as usize];
        let orders = if p == 2 && e == 1 {
            logs[1] = Some([0, 0]);
            vec![]
        } else if p == 2 && e == 2 {
            logs[1] = Some([0, 0]);
            logs[3] = Some([1, 0]);
            vec![2]
        } else if p == 2 {
            let half = pe / 4;
            let mut x = 1u64;
            for t in 0..half {
                logs[x as usize] = Some([0, t as u32]);
                logs[(pe - x) as usize] = Some([1, t as u32]);
                x = x * 5 % pe;
            }
            vec![2, half]
        } else {
            let phi = (p - 1) * p.pow(e - 1);
            let g = primitive_root(p, e);
            let mut x = 1u64;
            for k in 0..phi {
                logs[x as usize] = Some([k as u32, 0]);
                x = x * g % pe;
            }
            vec![phi]
        };
        Component { modulus: pe, orders, logs }
    }
}

/// Smallest primitive root modulo `p^e` for odd `p`.
fn primitive_root(p: u64, e: u32) -> u64 {
    let pe = p.pow(e);
    let phi = (p - 1) * p.pow(e - 1);
    let mut prime_divisors: Vec<u64> = factorize(p - 1).factors().iter().map(|&(q, _)| q).collect();
    if e > 1 {
        prime_divisors.push(p);
    }
    (2..pe)
        .find(|&g| gcd(g, p) == 1 && prime_divisors.iter().all(|&q| pow_mod(g, phi / q, pe) != 1))
        .expect("odd prime powers are cyclic")
}

/// Generator structure and discrete-log tables for `(Z/NZ)^x`.
#[derive(Debug)]
pub struct CharacterGroup {
    modulus: u64,
    components: Vec<Component>,
    /// Exponent of the group; every character value is an `exponent`-th root of unity.
    exponent: u64,
}

impl CharacterGroup {
    pub fn new(modulus: u64) -> Arc<CharacterGroup> {
        assert!(modulus >= 1, "character modulus must be positive");
        let components: Vec<Component> =
            factorize(modulus).factors().iter().map(|&(p, e)| Component::new(p, e)).collect();
        let exponent = components.iter().flat_map(|c| c.orders.iter().copied()).fold(1, lcm);
        Arc::new(CharacterGroup { modulus, components, exponent })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Orders of the generators, in the order used by exponent vectors.
    pub fn generator_orders(&self) -> Vec<u64> {
        self.components.iter().flat_map(|c| c.orders.iter().copied()).collect()
    }

    /// Discrete logs of `n` against all generators, or `None` when `gcd(n, N) > 1`.
    fn logs(&self, n: i64) -> Option<Vec<u64>> {
        let mut out = Vec::with_capacity(self.components.len() * 2);
        for comp in &self.components {
            let l = comp.logs[residue(n, comp.modulus) as usize]?;
            out.extend(l.iter().take(comp.orders.len()).map(|&x| x as u64));
        }
        Some(out)
    }
}

/// A Dirichlet character, given by its exponents against the group generators.
#[derive(Debug, Clone)]
pub struct DirichletCharacter {
    group: Arc<CharacterGroup>,
    exponents: Vec<u64>,
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.group.modulus == other.group.modulus && self.exponents == other.exponents
    }
}

impl Eq for DirichletCharacter {}

impl DirichletCharacter {
    pub fn principal(group: &Arc<CharacterGroup>) -> DirichletCharacter {
        let k = group.generator_orders().len();
        DirichletCharacter { group: Arc::clone(group), exponents: vec![0; k] }
    }

    /// Character with the given exponents (reduced modulo the generator orders).
    pub fn from_exponents(group: &Arc<CharacterGroup>, exponents: &[u64]) -> Option<DirichletCharacter> {
        let orders = group.generator_orders();
        if orders.len() != exponents.len() {
            return None;
        }
        let exponents = exponents.iter().zip(&orders).map(|(&k, &o)| k % o).collect();
        Some(DirichletCharacter { group: Arc::clone(group), exponents })
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn is_principal(&self) -> bool {
        self.exponents.iter().all(|&k| k == 0)
    }

    pub fn conj(&self) -> DirichletCharacter {
        let orders = self.group.generator_orders();
        let exponents = self.exponents.iter().zip(&orders).map(|(&k, &o)| (o - k) % o).collect();
        DirichletCharacter { group: Arc::clone(&self.group), exponents }
    }

    /// `chi(n)` as an angle, or `None` when `gcd(n, N) > 1`.
    pub fn eval(&self, n: i64) -> Option<RationalAngle> {
        let logs = self.group.logs(n)?;
        let l = self.group.exponent;
        let orders = self.group.generator_orders();
        let mut num: u128 = 0;
        for ((&k, &ind), &ord) in self.exponents.iter().zip(&logs).zip(&orders) {
            num = (num + k as u128 * ind as u128 % ord as u128 * (l / ord) as u128) % l as u128;
        }
        Some(RationalAngle::new(num as i128, l))
    }

    /// `chi(n)` as a complex number, zero off the units.
    pub fn value(&self, n: i64) -> Complex64 {
        self.eval(n).map_or(Complex64::new(0.0, 0.0), RationalAngle::to_complex)
    }

    /// `0` for even characters, `1` for odd ones.
    pub fn parity(&self) -> u8 {
        let a = self.eval(-1).expect("-1 is a unit");
        if a.is_zero() {
            0
        } else {
            debug_assert_eq!(a, RationalAngle::new(1, 2));
            1
        }
    }
}

/// All `phi(N)` characters, ordered lexicographically by exponent vector.
pub fn characters_mod(modulus: u64) -> Vec<DirichletCharacter> {
    characters_of(&CharacterGroup::new(modulus))
}

pub fn characters_of(group: &Arc<CharacterGroup>) -> Vec<DirichletCharacter> {
    let orders = group.generator_orders();
    let mut out = Vec::new();
    let mut exps = vec![0u64; orders.len()];
    loop {
        out.push(DirichletCharacter { group: Arc::clone(group), exponents: exps.clone() });
        // odometer, last coordinate fastest
        let mut i = orders.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            exps[i] += 1;
            if exps[i] < orders[i] {
                break;
            }
            exps[i] = 0;
        }
    }
}

pub fn char_eval(chi: &DirichletCharacter, n: i64) -> Option<RationalAngle> {
    chi.eval(n)
}

pub fn char_parity(chi: &DirichletCharacter) -> u8 {
    chi.parity()
}

/// Exact value of `sum_chi chi(a) conj(chi(c))`: `Some(k)` when the sum is the
/// integer `k`, `None` when the angles do not form a union of full cyclic
/// groups (which would mean the sum is not an integer).
pub fn orthogonality_sum_exact(chars: &[DirichletCharacter], a: i64, c: i64) -> Option<i64> {
    let mut histogram: BTreeMap<RationalAngle, u64> = BTreeMap::new();
    for chi in chars {
        let angle = match (chi.eval(a), chi.eval(c)) {
            (Some(x), Some(y)) => x - y,
            _ => continue,
        };
        *histogram.entry(angle).or_default() += 1;
    }
    if histogram.is_empty() {
        return Some(0);
    }
    if histogram.len() == 1 {
        let (&angle, &count) = histogram.iter().next().unwrap();
        return angle.is_zero().then_some(count as i64);
    }
    // a uniform histogram on all k-th roots of unity (k > 1) sums to zero
    let k = histogram.len() as u64;
    let count = *histogram.values().next().unwrap();
    let uniform = histogram.values().all(|&v| v == count);
    let full_group = (0..k).all(|j| histogram.contains_key(&RationalAngle::new(j as i128, k)));
    (uniform && full_group).then_some(0)
}
