//! Exact integer geometry on the hexagonal lattice.
//!
//! Cells are addressed by axial coordinates `(q, r)`.  The six unit steps are
//! numbered counterclockwise starting from the positive `q` axis, so direction
//! `k` points at angle `k·π/3` once the lattice is embedded in the plane with
//! `center(q, r) = q·(1, 0) + r·(1/2, √3/2)`.
//!
//! Everything that decides legality is integer arithmetic; the floating point
//! embedding is only used for rendering and for reporting distances.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Axial step vectors, indexed by direction.
pub const STEPS: [Hex; 6] = [
    Hex::new(1, 0),
    Hex::new(0, 1),
    Hex::new(-1, 1),
    Hex::new(-1, 0),
    Hex::new(0, -1),
    Hex::new(1, -1),
];

/// Reduces an arbitrary integer modulo 6 into `0..6`.
#[inline]
pub fn mod6(x: i64) -> u8 {
    x.rem_euclid(6) as u8
}

/// A lattice cell in axial coordinates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Hex {
    pub q: i32,
    pub r: i32,
}

impl Hex {
    pub const ORIGIN: Hex = Hex::new(0, 0);

    pub const fn new(q: i32, r: i32) -> Self {
        Hex { q, r }
    }

    /// The cell adjacent to `self` across direction `k` (taken mod 6).
    #[inline]
    pub fn neighbor(self, k: u8) -> Hex {
        self + STEPS[(k % 6) as usize]
    }

    /// The six neighbours in direction order.
    pub fn neighbors(self) -> [Hex; 6] {
        std::array::from_fn(|k| self + STEPS[k])
    }

    /// Counterclockwise rotation by `k·π/3` about the lattice origin.
    ///
    /// One sixth-turn is `(q, r) ↦ (−r, q + r)`.
    pub fn rotate(self, k: i64) -> Hex {
        let mut h = self;
        for _ in 0..mod6(k) {
            h = Hex::new(-h.r, h.q + h.r);
        }
        h
    }

    /// Lattice (hex) distance to the origin: the minimum number of unit steps.
    pub fn norm(self) -> i32 {
        (self.q.abs() + self.r.abs() + (self.q + self.r).abs()) / 2
    }

    /// Lattice distance between two cells.
    pub fn distance(self, other: Hex) -> i32 {
        (self - other).norm()
    }

    /// Squared Cartesian length, scaled by 4 to stay integral:
    /// `4·|center|² = (2q + r)² + 3r²`.
    pub fn cartesian_norm2_x4(self) -> i64 {
        let a = 2 * self.q as i64 + self.r as i64;
        let b = self.r as i64;
        a * a + 3 * b * b
    }

    /// Cartesian centre of the cell (unit spacing between adjacent centres).
    pub fn center(self) -> (f64, f64) {
        let q = self.q as f64;
        let r = self.r as f64;
        (q + r / 2.0, r * 3f64.sqrt() / 2.0)
    }

    /// Cartesian length of the cell centre.
    pub fn cartesian_norm(self) -> f64 {
        (self.cartesian_norm2_x4() as f64).sqrt() / 2.0
    }

    /// The direction `k` with `other == self.neighbor(k)`, if the cells are adjacent.
    pub fn direction_to(self, other: Hex) -> Option<u8> {
        let d = other - self;
        STEPS.iter().position(|&s| s == d).map(|k| k as u8)
    }
}

impl fmt::Display for Hex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.q, self.r)
    }
}

impl Add for Hex {
    type Output = Hex;
    fn add(self, o: Hex) -> Hex {
        Hex::new(self.q + o.q, self.r + o.r)
    }
}

impl Sub for Hex {
    type Output = Hex;
    fn sub(self, o: Hex) -> Hex {
        Hex::new(self.q - o.q, self.r - o.r)
    }
}

impl Neg for Hex {
    type Output = Hex;
    fn neg(self) -> Hex {
        Hex::new(-self.q, -self.r)
    }
}

impl Mul<Hex> for i32 {
    type Output = Hex;
    fn mul(self, h: Hex) -> Hex {
        Hex::new(self * h.q, self * h.r)
    }
}

/// The unit step in direction `k` (taken mod 6).
#[inline]
pub fn step(k: u8) -> Hex {
    STEPS[(k % 6) as usize]
}

/// Canonical identifier of a lattice edge.
///
/// Every geometric edge is the boundary between a cell and its neighbour in
/// one of the directions 0, 1, 2; the id stores that cell and direction, so
/// `EdgeId::new(c, k) == EdgeId::new(c.neighbor(k), k + 3)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeId {
    pub cell: Hex,
    pub dir: u8,
}

impl EdgeId {
    pub fn new(cell: Hex, k: u8) -> Self {
        let k = k % 6;
        if k < 3 {
            EdgeId { cell, dir: k }
        } else {
            EdgeId { cell: cell.neighbor(k), dir: k - 3 }
        }
    }

    /// The two cells separated by this edge.
    pub fn cells(self) -> (Hex, Hex) {
        (self.cell, self.cell.neighbor(self.dir))
    }
}

/// A vector given by length and angle, where the angle is a whole number of
/// sixth-turns.
///
/// Only angles that reduce to multiples of `π/3` are representable, which is
/// all the spiral construction ever needs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PolarVector {
    pub rho: u32,
    theta: u8,
}

impl PolarVector {
    /// Builds a polar vector from a length and an angle of `sixth_turns·π/3`.
    pub fn new(rho: u32, sixth_turns: i64) -> Self {
        PolarVector { rho, theta: mod6(sixth_turns) }
    }

    /// Builds a polar vector from an angle given as the fraction
    /// `num/den · π`; fails unless it reduces to a multiple of `π/3`.
    pub fn from_pi_fraction(rho: u32, num: i64, den: i64) -> Option<Self> {
        if den == 0 || (3 * num) % den != 0 {
            return None;
        }
        Some(Self::new(rho, 3 * num / den))
    }

    /// Angle in sixth-turns, reduced to `0..6`.
    pub fn theta(self) -> u8 {
        self.theta
    }

    /// The lattice cell this vector points to from the origin.
    pub fn to_cell(self) -> Hex {
        (self.rho as i32) * step(self.theta)
    }
}

/// Converts a polar vector to its lattice cell: `rho · step(theta)`.
pub fn polar_to_cell(v: PolarVector) -> Hex {
    v.to_cell()
}

/// The spiral anchor `x_n = Σ_{i=1..n} (2^{i−1}, 4iπ/3)`; `x_0` is the origin.
pub fn spiral_anchor(n: u32) -> Hex {
    (1..=n).fold(Hex::ORIGIN, |acc, i| {
        acc + polar_to_cell(PolarVector::new(1 << (i - 1), 4 * i as i64))
    })
}

/// A direct isometry of the lattice: rotate by `k` sixth-turns about the
/// origin, then translate by `v`.  Orientations rotate along with cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Isometry {
    pub k: u8,
    pub v: Hex,
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry { k: 0, v: Hex::ORIGIN };

    pub fn new(k: i64, v: Hex) -> Self {
        Isometry { k: mod6(k), v }
    }

    pub fn translation(v: Hex) -> Self {
        Isometry { k: 0, v }
    }

    pub fn apply(self, c: Hex) -> Hex {
        c.rotate(self.k as i64) + self.v
    }

    pub fn apply_orientation(self, o: u8) -> u8 {
        (o + self.k) % 6
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(self, other: Isometry) -> Isometry {
        Isometry { k: (self.k + other.k) % 6, v: other.v.rotate(self.k as i64) + self.v }
    }

    pub fn inverse(self) -> Isometry {
        let k = mod6(-(self.k as i64));
        Isometry { k, v: (-self.v).rotate(k as i64) }
    }
}

/// All cells within lattice distance `radius` of `center`, in `(q, r)` order.
pub fn hex_ball(center: Hex, radius: i32) -> Vec<Hex> {
    let mut out = Vec::new();
    for dq in -radius..=radius {
        let lo = (-radius).max(-dq - radius);
        let hi = radius.min(-dq + radius);
        for dr in lo..=hi {
            out.push(center + Hex::new(dq, dr));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neighbor_table() {
        assert_eq!(Hex::ORIGIN.neighbor(0), Hex::new(1, 0));
        assert_eq!(Hex::ORIGIN.neighbor(4), Hex::new(0, -1));
        assert_eq!(Hex::new(2, 1).neighbor(2), Hex::new(1, 2));
        for k in 0..6u8 {
            assert_eq!(step(k + 3), -step(k));
        }
    }

    #[test]
    fn rotation_examples() {
        assert_eq!(Hex::new(1, 0).rotate(1), Hex::new(0, 1));
        assert_eq!(Hex::new(1, 0).rotate(4), Hex::new(0, -1));
        // Two sixth-turns by hand: (3,-1) -> (1,2) -> (-2,3).
        assert_eq!(Hex::new(3, -1).rotate(1), Hex::new(1, 2));
        assert_eq!(Hex::new(3, -1).rotate(2), Hex::new(-2, 3));
        for k in 0..6u8 {
            assert_eq!(step(0).rotate(k as i64), step(k));
        }
    }

    #[test]
    fn polar_examples() {
        let p = PolarVector::from_pi_fraction(1, 4, 3).unwrap();
        assert_eq!(polar_to_cell(p), Hex::new(0, -1));
        let p = PolarVector::from_pi_fraction(2, 8, 3).unwrap();
        assert_eq!(polar_to_cell(p), Hex::new(-2, 2));
        assert_eq!(polar_to_cell(PolarVector::new(0, 5)), Hex::ORIGIN);
        assert!(PolarVector::from_pi_fraction(1, 1, 4).is_none());
    }

    #[test]
    fn spiral_anchor_examples() {
        assert_eq!(spiral_anchor(0), Hex::ORIGIN);
        assert_eq!(spiral_anchor(1), Hex::new(0, -1));
        assert_eq!(spiral_anchor(2), Hex::new(-2, 1));
        assert_eq!(spiral_anchor(3), Hex::new(2, 1));
    }

    #[test]
    fn edge_ids_are_canonical() {
        let c = Hex::new(3, -2);
        for k in 0..6u8 {
            assert_eq!(EdgeId::new(c, k), EdgeId::new(c.neighbor(k), k + 3));
        }
    }

    #[test]
    fn ball_sizes() {
        for r in 0..6 {
            assert_eq!(hex_ball(Hex::new(2, 5), r).len() as i32, 3 * r * (r + 1) + 1);
        }
    }

    #[test]
    fn isometry_group_laws() {
        let g = Isometry::new(2, Hex::new(3, -1));
        let h = Isometry::new(5, Hex::new(-2, 4));
        let c = Hex::new(7, -3);
        assert_eq!(g.compose(h).apply(c), g.apply(h.apply(c)));
        assert_eq!(g.inverse().apply(g.apply(c)), c);
        assert_eq!(g.compose(g.inverse()), Isometry::IDENTITY);
    }
}
