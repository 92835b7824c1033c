//! Cusps of `Gamma_0(Q)`: representatives `r/q`, widths, stabilizers and
//! integral scaling matrices.
//!
//! The scaling matrix of `r/q` is `[[r, x], [q, y]] * diag(sqrt(w), 1/sqrt(w))`.
//! Only the integer part is stored; no sum downstream needs `sqrt(w)` itself.

use crate::error::{precondition, Result};
use crate::modular::{divisors, euler_phi, gcd, inverse_of_residue, residue};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CuspData {
    pub level: u64,
    pub q: u64,
    pub r: u64,
    pub width: u64,
    /// Cusp parameter; always 0 since every cusp handled here is singular.
    pub eta: u64,
}

/// Integer part `[[r, x], [q, y]]` of a scaling matrix, with the cusp width.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScalingMatrix {
    pub r: i64,
    pub x: i64,
    pub q: i64,
    pub y: i64,
    pub width: u64,
}

impl ScalingMatrix {
    pub fn matrix(&self) -> Mat2 {
        Mat2::new(self.r as i128, self.x as i128, self.q as i128, self.y as i128)
    }
}

/// A 2x2 integer matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mat2 {
    pub a: i128,
    pub b: i128,
    pub c: i128,
    pub d: i128,
}

impl Mat2 {
    pub const fn new(a: i128, b: i128, c: i128, d: i128) -> Mat2 {
        Mat2 { a, b, c, d }
    }

    pub fn det(&self) -> i128 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse_sl2(&self) -> Option<Mat2> {
        (self.det() == 1).then(|| Mat2::new(self.d, -self.b, -self.c, self.a))
    }

    /// Whether the Moebius map fixes the rational point `num/den`.
    pub fn fixes(&self, num: i128, den: i128) -> bool {
        // (a z + b)/(c z + d) = z  <=>  c z^2 + (d - a) z - b = 0
        self.c * num * num + (self.d - self.a) * num * den - self.b * den * den == 0
    }
}

fn check_divides(level: u64, q: u64) -> Result<()> {
    if level == 0 || q == 0 || level % q != 0 {
        return Err(precondition(format!("q = {q} must divide Q = {level}")));
    }
    Ok(())
}

fn check_cusp(level: u64, q: u64, r: u64) -> Result<()> {
    check_divides(level, q)?;
    if gcd(r, level) != 1 {
        return Err(precondition(format!("gcd(r, Q) > 1 for r = {r}, Q = {level}")));
    }
    Ok(())
}

/// `Q / gcd(Q, q^2)`.
pub fn width(level: u64, q: u64) -> Result<u64> {
    check_divides(level, q)?;
    let q2 = q as u128 * q as u128;
    let g = gcd_u128(level as u128, q2);
    Ok((level as u128 / g) as u64)
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// One cusp per `q | Q` and class `r mod gcd(q, Q/q)` coprime to the modulus,
/// ordered by `q`, then `r`.
pub fn cusp_representatives(level: u64) -> Vec<CuspData> {
    assert!(level >= 1, "level must be positive");
    let mut out = Vec::new();
    for q in divisors(level).expect("level has few divisors") {
        let g = gcd(q, level / q);
        let w = width(level, q).expect("q divides Q");
        let mut rs: Vec<u64> = (1..=g)
            .filter(|&k| gcd(k, g) == 1)
            .map(|class| (0..).map(|j| class + j * g).find(|&r| gcd(r, level) == 1).expect("a coprime lift exists"))
            .collect();
        rs.sort_unstable();
        out.extend(rs.into_iter().map(|r| CuspData { level, q, r, width: w, eta: 0 }));
    }
    out
}

/// `sum_{q | Q} phi(gcd(q, Q/q))`.
pub fn cusp_count(level: u64) -> u64 {
    divisors(level).expect("level has few divisors").into_iter().map(|q| euler_phi(gcd(q, level / q))).sum()
}

/// `y` is the least positive residue of `r^-1` modulo `Q` and `x = (r y - 1)/q`.
pub fn scaling_matrix(level: u64, q: u64, r: u64) -> Result<ScalingMatrix> {
    check_cusp(level, q, r)?;
    let inv = inverse_of_residue(r % level, level).expect("r is a unit");
    let y = if inv == 0 { level } else { inv };
    let x = (r as i128 * y as i128 - 1) / q as i128;
    Ok(ScalingMatrix { r: r as i64, x: x as i64, q: q as i64, y: y as i64, width: width(level, q)? })
}

/// `[[1 - r q w, r^2 w], [-q^2 w, 1 + r q w]]`.
pub fn stabilizer_generator(level: u64, q: u64, r: u64) -> Result<Mat2> {
    check_cusp(level, q, r)?;
    let w = width(level, q)? as i128;
    let (r, q) = (r as i128, q as i128);
    Ok(Mat2::new(1 - r * q * w, r * r * w, -q * q * w, 1 + r * q * w))
}

/// Whether `c q sqrt(w_q)` lies in the allowed moduli of the pair `(infinity, r/q)`.
pub fn allowed_modulus_infty_rq(level: u64, q: u64, c: u64) -> Result<bool> {
    check_divides(level, q)?;
    Ok(gcd(c, level / q) == 1)
}

/// `r^-1` modulo `gcd(q, Q/q)`, the only piece of the scaling matrix the
/// evaluated sums depend on.
pub fn r_bar_mod_g(level: u64, q: u64, r: u64) -> u64 {
    let g = gcd(q, level / q);
    inverse_of_residue(residue(r as i64, g), g).expect("r is coprime to g")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn representatives_examples() {
        let one = cusp_representatives(1);
        assert_eq!(one, vec![CuspData { level: 1, q: 1, r: 1, width: 1, eta: 0 }]);

        let four = cusp_representatives(4);
        assert_eq!(four.iter().map(|c| c.q).collect::<Vec<_>>(), vec![1, 2, 4]);
        assert!(four.iter().all(|c| c.r == 1));

        let rs: Vec<u64> = cusp_representatives(36).iter().filter(|c| c.q == 6).map(|c| c.r).collect();
        assert_eq!(rs, vec![1, 5]);
    }

    #[test]
    fn representative_adjusted_to_be_coprime() {
        // Q = 12, q = 2: g = gcd(2, 6) = 2, class 1 mod 2; r = 1 already coprime
        // Q = 30, q = 1: g = 1, class 1; r = 1
        // Q = 45, q = 3: g = 3, classes 1, 2; 2 is coprime to 45
        let rs: Vec<u64> = cusp_representatives(45).iter().filter(|c| c.q == 3).map(|c| c.r).collect();
        assert_eq!(rs, vec![1, 2]);
        // Q = 50, q = 5: g = 5, classes 1..4; 2 and 4 are even so shift by 5
        let rs: Vec<u64> = cusp_representatives(50).iter().filter(|c| c.q == 5).map(|c| c.r).collect();
        assert_eq!(rs, vec![1, 3, 7, 9]);
        for cusp in cusp_representatives(50) {
            assert_eq!(gcd(cusp.r, 50), 1);
        }
    }

    #[test]
    fn width_examples() {
        assert_eq!(width(4, 2).unwrap(), 1);
        assert_eq!(width(12, 2).unwrap(), 3);
        assert_eq!(width(7, 1).unwrap(), 7);
        assert!(width(12, 5).is_err());
    }

    #[test]
    fn scaling_matrix_examples() {
        assert_eq!(scaling_matrix(4, 2, 1).unwrap(), ScalingMatrix { r: 1, x: 0, q: 2, y: 1, width: 1 });
        assert_eq!(scaling_matrix(1, 1, 1).unwrap(), ScalingMatrix { r: 1, x: 0, q: 1, y: 1, width: 1 });
        let s = scaling_matrix(12, 3, 1).unwrap();
        assert_eq!((s.y, s.x), (1, 0));
        assert!(scaling_matrix(12, 3, 2).is_err());
        assert!(scaling_matrix(12, 5, 1).is_err());
    }

    #[test]
    fn stabilizer_examples() {
        assert_eq!(stabilizer_generator(4, 2, 1).unwrap(), Mat2::new(-1, 1, -4, 3));
        assert_eq!(stabilizer_generator(1, 1, 1).unwrap(), Mat2::new(0, 1, -1, 2));
    }

    #[test]
    fn allowed_modulus_examples() {
        assert!(allowed_modulus_infty_rq(4, 2, 1).unwrap());
        assert!(!allowed_modulus_infty_rq(4, 2, 2).unwrap());
        assert!(allowed_modulus_infty_rq(12, 12, 6).unwrap());
    }

    #[test]
    fn conjugation_gives_width_translation() {
        for level in 1..=36u64 {
            for cusp in cusp_representatives(level) {
                let sm = scaling_matrix(level, cusp.q, cusp.r).unwrap();
                let m = sm.matrix();
                assert_eq!(m.det(), 1);
                assert_eq!(sm.x % (level / cusp.q) as i64, 0);
                assert_eq!((sm.r as i128 * sm.y as i128).rem_euclid(level as i128), 1 % level as i128);
                let g = stabilizer_generator(level, cusp.q, cusp.r).unwrap();
                assert_eq!(g.det(), 1);
                assert_eq!(g.c % level as i128, 0);
                assert!(g.fixes(cusp.r as i128, cusp.q as i128));
                // M^-1 g M = [[1, w], [0, 1]]; the diagonal sqrt(w) factor rescales it to [[1, 1], [0, 1]]
                let conj = m.inverse_sl2().unwrap().mul(&g).mul(&m);
                assert_eq!(conj, Mat2::new(1, cusp.width as i128, 0, 1));
            }
        }
    }

    #[test]
    fn counts_match_formula() {
        for level in 1..=200u64 {
            assert_eq!(cusp_representatives(level).len() as u64, cusp_count(level));
            assert_eq!(width(level, 1).unwrap(), level);
            let q2 = level as u128 * level as u128;
            assert_eq!(width(level, level).unwrap() as u128, level as u128 / gcd_u128(level as u128, q2));
        }
    }
}
