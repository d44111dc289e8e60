//! Triangle chains and action-angle coordinates.
//!
//! A chain encodes a totally elliptic representation of an n-punctured
//! sphere group: fixed points `C_1..C_n` of the puncture rotations and
//! `B_1..B_{n-3}` of the pants-curve rotations, joined into `n - 2`
//! clockwise triangles. The two interior angles at each shared vertex `B_i`
//! sum to pi; writing the first as `pi - beta_i/2` defines the action
//! coordinate, and the turning angle between consecutive triangles at `B_i`
//! is the angle coordinate `gamma_i`.
//!
//! Conventions used throughout: triangles are clockwise (the large-angle
//! case; counterclockwise chains are rejected), the angle at `C_p` is
//! `pi - alpha_p/2`, and `gamma_i` is the clockwise rotation taking the ray
//! `B_i -> C_{i+1}` to the ray `B_i -> C_{i+2}`. With these choices adjacent
//! triangles overlap exactly when `gamma_i` lies in `(pi, 2pi)`.

use crate::dtrep::DtRep;
use crate::hyp::{self, Anchor, HPoint, HTriangle, Isometry, Orientation};
use thiserror::Error;

/// Minimum area of a chain triangle before it counts as degenerate.
pub const DEGENERACY_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChainError {
    #[error("need at least 3 punctures, got {n}")]
    TooFewPunctures { n: usize },
    #[error("coordinate vector lengths do not match n = {n}")]
    BadLengths { n: usize },
    #[error("angle defect {value} out of range (0, 2pi) at puncture {index}")]
    AlphaRange { index: usize, value: f64 },
    #[error("action coordinate {value} out of range (0, 2pi) at curve {index}")]
    BetaRange { index: usize, value: f64 },
    #[error("defect sum {sum} does not exceed 2pi(n-1) = {bound}")]
    DefectSum { sum: f64, bound: f64 },
    #[error("triangle {index} is degenerate (area {area})")]
    DegenerateTriangle { index: usize, area: f64 },
    #[error("triangle {index} is not ordered clockwise")]
    NotClockwise { index: usize },
    #[error(transparent)]
    Hyp(#[from] hyp::HypError),
}

/// Action-angle coordinates of a chain: angle defects `alpha`, action
/// coordinates `beta` strictly inside the polytope cut out by the cone-angle
/// conditions, and angle coordinates `gamma` in `[0, 2pi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionAngle {
    pub n: usize,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub gamma: Vec<f64>,
}

impl ActionAngle {
    pub fn new(alpha: Vec<f64>, beta: Vec<f64>, gamma: Vec<f64>) -> Result<Self, ChainError> {
        let n = alpha.len();
        let coords = ActionAngle { n, alpha, beta, gamma };
        coords.validate()?;
        Ok(coords)
    }

    pub fn validate(&self) -> Result<(), ChainError> {
        let n = self.n;
        let tau = std::f64::consts::TAU;
        if n < 3 {
            return Err(ChainError::TooFewPunctures { n });
        }
        if self.alpha.len() != n
            || self.beta.len() != n.saturating_sub(3)
            || self.gamma.len() != n.saturating_sub(3)
        {
            return Err(ChainError::BadLengths { n });
        }
        for (i, &a) in self.alpha.iter().enumerate() {
            if !(a > 0.0 && a < tau) {
                return Err(ChainError::AlphaRange { index: i, value: a });
            }
        }
        for (i, &b) in self.beta.iter().enumerate() {
            if !(b > 0.0 && b < tau) {
                return Err(ChainError::BetaRange { index: i, value: b });
            }
        }
        let sum: f64 = self.alpha.iter().sum();
        let bound = tau * (n as f64 - 1.0);
        if !(sum > bound) {
            return Err(ChainError::DefectSum { sum, bound });
        }
        // The triangle angle tuples encode the cone-angle polytope; reject
        // any tuple whose angle sum reaches pi (a degenerate triangle).
        for (k, t) in self.triangle_angles().into_iter().enumerate() {
            let area = std::f64::consts::PI - t.iter().sum::<f64>();
            if area < DEGENERACY_MARGIN {
                return Err(ChainError::DegenerateTriangle { index: k, area });
            }
        }
        Ok(())
    }

    /// Interior angle triples of the chain triangles, in vertex order.
    pub fn triangle_angles(&self) -> Vec<[f64; 3]> {
        let n = self.n;
        let pi = std::f64::consts::PI;
        let mut out = Vec::with_capacity(n - 2);
        if n == 3 {
            out.push([
                pi - self.alpha[0] / 2.0,
                pi - self.alpha[1] / 2.0,
                pi - self.alpha[2] / 2.0,
            ]);
            return out;
        }
        out.push([pi - self.alpha[0] / 2.0, pi - self.alpha[1] / 2.0, pi - self.beta[0] / 2.0]);
        for i in 1..=n - 4 {
            out.push([
                self.beta[i - 1] / 2.0,
                pi - self.alpha[i + 1] / 2.0,
                pi - self.beta[i] / 2.0,
            ]);
        }
        out.push([
            self.beta[n - 4] / 2.0,
            pi - self.alpha[n - 2] / 2.0,
            pi - self.alpha[n - 1] / 2.0,
        ]);
        out
    }
}

/// A placed triangle chain.
#[derive(Debug, Clone)]
pub struct TriangleChain {
    pub c: Vec<HPoint>,
    pub b: Vec<HPoint>,
    pub triangles: Vec<HTriangle>,
}

impl TriangleChain {
    pub fn n(&self) -> usize {
        self.c.len()
    }

    /// Check shared-vertex, orientation and degeneracy invariants.
    pub fn validate(&self) -> Result<(), ChainError> {
        let n = self.n();
        if n < 3 {
            return Err(ChainError::TooFewPunctures { n });
        }
        if self.b.len() + 3 != n || self.triangles.len() + 2 != n {
            return Err(ChainError::BadLengths { n });
        }
        for (k, t) in self.triangles.iter().enumerate() {
            if t.area() < DEGENERACY_MARGIN {
                return Err(ChainError::DegenerateTriangle { index: k, area: t.area() });
            }
            if hyp::orientation(t.vertices[0], t.vertices[1], t.vertices[2]) != Orientation::Cw {
                return Err(ChainError::NotClockwise { index: k });
            }
        }
        Ok(())
    }

    /// Total area of the chain triangles (half the assembled surface).
    pub fn area(&self) -> f64 {
        self.triangles.iter().map(|t| t.area()).sum()
    }
}

/// Build the chain with the given coordinates, anchored at `anchor` (first
/// vertex `C_1`, direction of `C_1 -> C_2`; the anchor orientation is fixed
/// to clockwise regardless of what the caller passes).
pub fn build_chain(coords: &ActionAngle, anchor: Anchor) -> Result<TriangleChain, ChainError> {
    coords.validate()?;
    let n = coords.n;
    let angle_sets = coords.triangle_angles();
    let anchor = Anchor { orientation: Orientation::Cw, ..anchor };

    let mut triangles: Vec<HTriangle> = Vec::with_capacity(n - 2);
    let first =
        hyp::triangle_from_angles(angle_sets[0][0], angle_sets[0][1], angle_sets[0][2], anchor)?;
    triangles.push(first);

    for k in 1..n - 2 {
        let prev = &triangles[k - 1];
        let shared = prev.vertices[2];
        let c_prev = prev.vertices[1];
        // gamma_k is the clockwise rotation from the ray to the previous
        // puncture vertex to the ray to the next one.
        let dir = hyp::direction(shared, c_prev) - coords.gamma[k - 1];
        let t = hyp::triangle_from_angles(
            angle_sets[k][0],
            angle_sets[k][1],
            angle_sets[k][2],
            Anchor { at: shared, dir, orientation: Orientation::Cw },
        )?;
        triangles.push(t);
    }

    let mut c = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n - 3);
    c.push(triangles[0].vertices[0]);
    c.push(triangles[0].vertices[1]);
    for t in triangles.iter().take(n - 2).skip(1) {
        b.push(t.vertices[0]);
        c.push(t.vertices[1]);
    }
    c.push(triangles[n - 3].vertices[2]);

    let chain = TriangleChain { c, b, triangles };
    chain.validate()?;
    Ok(chain)
}

/// Measure the action-angle coordinates of a placed chain.
pub fn read_coords(chain: &TriangleChain, alpha: &[f64]) -> Result<ActionAngle, ChainError> {
    chain.validate()?;
    let n = chain.n();
    let pi = std::f64::consts::PI;
    let mut beta = Vec::with_capacity(n - 3);
    let mut gamma = Vec::with_capacity(n - 3);
    for i in 0..n - 3 {
        let t = &chain.triangles[i];
        // Angle at the shared vertex in the earlier triangle is pi - beta/2.
        beta.push(2.0 * (pi - t.angles[2]));
        let shared = t.vertices[2];
        let c_prev = t.vertices[1];
        let c_next = chain.triangles[i + 1].vertices[1];
        let g = hyp::wrap_tau(hyp::direction(shared, c_prev) - hyp::direction(shared, c_next));
        gamma.push(g);
    }
    ActionAngle::new(alpha.to_vec(), beta, gamma)
}

/// The representation associated with a chain: each puncture generator maps
/// to the counterclockwise rotation by `alpha_p` about `C_p`. The generators
/// multiply to the identity, and each partial product
/// `(rho(c_1) ... rho(c_{i+1}))^{-1}` is the counterclockwise rotation by
/// `beta_i` about `B_i`.
pub fn chain_rep(chain: &TriangleChain, alpha: &[f64]) -> Result<DtRep, ChainError> {
    chain.validate()?;
    let gens: Vec<Isometry> =
        chain.c.iter().zip(alpha).map(|(&c, &a)| hyp::elliptic(c, a)).collect();
    Ok(DtRep { n: chain.n(), alpha: alpha.to_vec(), gens })
}
