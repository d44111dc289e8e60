//! Totally elliptic representation tuples and the constructive route from a
//! representation to a samosa assembly realizing it: the puncture-removal
//! game that picks a chained pants decomposition with non-degenerate
//! triangles, generator standardization, untwisting of the angle
//! coordinates, and the synthesis of a northern hamantash assembly.

use crate::assembly::{CurveParams, Hemisphere, SamosaAssembly};
use crate::chains::{self, ActionAngle, TriangleChain};
use crate::hyp::{self, HPoint, HTriangle, Isometry};
use thiserror::Error;

/// Two fixed points within this hyperbolic distance count as coincident
/// ("the same color") in the game.
pub const COLOR_TOL: f64 = 1e-7;
/// Chain triangles below this area count as degenerate for game purposes.
pub const GAME_AREA_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DtRepError {
    #[error("need at least 4 punctures, got {n}")]
    TooFewPunctures { n: usize },
    #[error("generator count {got} does not match n = {n}")]
    BadShape { n: usize, got: usize },
    #[error("generator {index} is not elliptic with rotation angle alpha (got {got}, want {want})")]
    BadRotationAngle { index: usize, got: f64, want: f64 },
    #[error("generator {index} is not elliptic")]
    NotElliptic { index: usize },
    #[error("generator product is off the identity by {dist}")]
    ProductNotIdentity { dist: f64 },
    #[error("defect sum {sum} not in the open interval (2pi(n-1), 2pi n)")]
    DefectSum { sum: f64 },
    #[error("all generator fixed points coincide (whole-angle tuple)")]
    WholeAngle,
    #[error("set of punctures must be consecutive, non-empty and proper")]
    BadPunctureSet,
    #[error("no legal move remains; fixed-point coincidences exceed what revision can repair")]
    ImpossiblePosition,
    #[error(transparent)]
    Chain(#[from] chains::ChainError),
    #[error(transparent)]
    Hyp(#[from] hyp::HypError),
}

/// A representation of the n-punctured sphere group by elliptic elements:
/// `gens[p]` is the image of the counterclockwise loop around puncture `p`
/// and rotates by `alpha[p]` about its fixed point; the ordered product of
/// all generators is the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct DtRep {
    pub n: usize,
    pub alpha: Vec<f64>,
    pub gens: Vec<Isometry>,
}

impl DtRep {
    pub fn validate(&self) -> Result<(), DtRepError> {
        let tau = std::f64::consts::TAU;
        if self.n < 4 {
            return Err(DtRepError::TooFewPunctures { n: self.n });
        }
        if self.gens.len() != self.n || self.alpha.len() != self.n {
            return Err(DtRepError::BadShape { n: self.n, got: self.gens.len() });
        }
        let sum: f64 = self.alpha.iter().sum();
        if !(sum > tau * (self.n as f64 - 1.0) && sum < tau * self.n as f64) {
            return Err(DtRepError::DefectSum { sum });
        }
        let mut fixes = Vec::with_capacity(self.n);
        for (i, g) in self.gens.iter().enumerate() {
            let (fix, ang) = hyp::elliptic_data(*g)
                .map_err(|_| DtRepError::NotElliptic { index: i })?;
            if (ang - self.alpha[i]).abs() > 1e-8 {
                return Err(DtRepError::BadRotationAngle { index: i, got: ang, want: self.alpha[i] });
            }
            fixes.push(fix);
        }
        let all_coincide = fixes.iter().all(|&p| hyp::dist(p, fixes[0]) < COLOR_TOL);
        if all_coincide {
            return Err(DtRepError::WholeAngle);
        }
        let mut prod = Isometry::identity();
        for g in &self.gens {
            prod = prod * *g;
        }
        let d = prod.proj_dist(Isometry::identity());
        if d > 1e-8 {
            return Err(DtRepError::ProductNotIdentity { dist: d });
        }
        Ok(())
    }

    /// Fixed points of the generators.
    pub fn fixed_points(&self) -> Result<Vec<HPoint>, DtRepError> {
        self.gens
            .iter()
            .enumerate()
            .map(|(i, g)| {
                hyp::elliptic_data(*g)
                    .map(|(p, _)| p)
                    .map_err(|_| DtRepError::NotElliptic { index: i })
            })
            .collect()
    }
}

/// A consecutive set of punctures on the circle, stored as a start index and
/// length (indices mod n).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub start: usize,
    pub len: usize,
}

impl Arc {
    pub fn contains(&self, n: usize, p: usize) -> bool {
        (0..self.len).any(|k| (self.start + k) % n == p)
    }
}

/// Product `rho(c_I)` over a consecutive set, in circle order, and its
/// fixed-point data.
///
/// The product is taken left to right starting at `set.start`; for a totally
/// elliptic tuple the result is elliptic whenever the set is proper.
pub fn set_rotation(rep: &DtRep, set: Arc) -> Result<(HPoint, f64), DtRepError> {
    if set.len == 0 || set.len >= rep.n {
        return Err(DtRepError::BadPunctureSet);
    }
    let mut prod = Isometry::identity();
    for k in 0..set.len {
        prod = prod * rep.gens[(set.start + k) % rep.n];
    }
    hyp::elliptic_data(prod).map_err(|_| DtRepError::NotElliptic { index: set.start })
}

/// The record of one game: the punctures in removal order (the first two
/// form the opening move) and how many times a previous move was revised.
#[derive(Debug, Clone, PartialEq)]
pub struct GameLog {
    pub removed: Vec<usize>,
    pub revisions: usize,
}

impl GameLog {
    /// The missing set after each move, smallest first; these are the pants
    /// curves of the chained decomposition the game builds.
    pub fn curve_sets(&self, n: usize) -> Vec<Vec<usize>> {
        let mut sets = Vec::new();
        let mut cur: Vec<usize> = Vec::new();
        for (i, &p) in self.removed.iter().enumerate() {
            cur.push(p);
            if i >= 1 && cur.len() <= n - 3 + 1 && i <= n - 4 + 1 {
                // after the first move (two punctures) and each later one
            }
            if i >= 1 {
                sets.push(cur.clone());
            }
        }
        sets.truncate(n - 3);
        sets
    }
}

fn color_of(rep: &DtRep, set: Arc) -> Result<HPoint, DtRepError> {
    set_rotation(rep, set).map(|(p, _)| p)
}

fn same_color(a: HPoint, b: HPoint) -> bool {
    hyp::dist(a, b) < COLOR_TOL
}

/// Play the puncture-removal game: find a removal order whose missing sets
/// define a chained pants decomposition in which every associated triangle
/// is non-degenerate.
///
/// Strategy follows the winning argument: play greedily, and whenever the
/// position becomes hopeless (every available move takes a puncture of the
/// missing set's color, or the game would end in a losing position), revise
/// the immediately preceding move, which is then guaranteed to admit the
/// previously removed puncture next.
pub fn play_game(rep: &DtRep) -> Result<GameLog, DtRepError> {
    rep.validate()?;
    let n = rep.n;
    let colors: Vec<HPoint> = rep.fixed_points()?;

    // Opening move: any adjacent pair of distinct colors.
    let mut opening = None;
    for i in 0..n {
        let j = (i + 1) % n;
        if !same_color(colors[i], colors[j]) {
            opening = Some(i);
            break;
        }
    }
    let Some(mut start) = opening else {
        return Err(DtRepError::ImpossiblePosition);
    };
    let mut len = 2usize;
    let mut removed = vec![start, (start + 1) % n];
    let mut revisions = 0usize;

    // Invariant: the missing set is the arc (start, len) and its color is
    // distinct from the last removed puncture's predecessor set.
    while len < n - 2 {
        let miss = Arc { start, len };
        let miss_color = color_of(rep, miss)?;
        let before = (start + n - 1) % n; // clockwise neighbor of the gap
        let after = (start + len) % n; // counterclockwise neighbor
        let can_ccw = !same_color(colors[after], miss_color);
        let can_cw = !same_color(colors[before], miss_color);
        if can_ccw || can_cw {
            if can_ccw {
                removed.push(after);
                len += 1;
            } else {
                removed.push(before);
                start = before;
                len += 1;
            }
            continue;
        }
        // Hopeless: revise the previous move.
        revisions += 1;
        let z = *removed.last().unwrap();
        let (prev_start, prev_len, y);
        if len == 2 {
            // Treat the opening pair as "I = {first}, z = second".
            let i0 = removed[0];
            prev_start = i0;
            prev_len = 1;
            y = (i0 + n - 1) % n;
        } else if z == start {
            // z was removed clockwise; the alternative is the puncture
            // counterclockwise of the previous set.
            prev_start = (start + 1) % n;
            prev_len = len - 1;
            y = (prev_start + prev_len) % n;
        } else {
            // z was removed counterclockwise; the alternative is clockwise.
            prev_start = start;
            prev_len = len - 1;
            y = (start + n - 1) % n;
        }
        let prev = Arc { start: prev_start, len: prev_len };
        let prev_color = color_of(rep, prev)?;
        if same_color(colors[y], prev_color) {
            // The winning argument guarantees this cannot happen for a
            // genuinely totally elliptic tuple; reaching it means the
            // coincidence tolerance is misconfigured for this input.
            return Err(DtRepError::ImpossiblePosition);
        }
        removed.pop();
        removed.push(y);
        removed.push(z);
        // New missing set: prev plus y plus z (z stays removable after the
        // revision, per the winning argument).
        let (s2, l2) = arc_of(&removed, n).ok_or(DtRepError::ImpossiblePosition)?;
        start = s2;
        len = l2;
    }

    let log = GameLog { removed, revisions };
    debug_assert!(game_wins(rep, &log)?);
    Ok(log)
}

/// Does a removal order win: every move legal and the final position not
/// losing?
pub fn game_wins(rep: &DtRep, log: &GameLog) -> Result<bool, DtRepError> {
    let n = rep.n;
    if log.removed.len() != n - 2 {
        return Ok(false);
    }
    let colors = rep.fixed_points()?;
    // Opening pair must be adjacent and differently colored.
    let a = log.removed[0];
    let b = log.removed[1];
    if (a + 1) % n != b && (b + 1) % n != a {
        return Ok(false);
    }
    if same_color(colors[a], colors[b]) {
        return Ok(false);
    }
    for m in 2..=n - 2 {
        let partial = &log.removed[..m];
        let Some((start, len)) = arc_of(partial, n) else {
            return Ok(false);
        };
        if m < n - 2 {
            // Move m+1 removes removed[m]; it must be adjacent to the arc
            // and differently colored from the arc.
            let z = log.removed[m];
            let before = (start + n - 1) % n;
            let after = (start + len) % n;
            if z != before && z != after {
                return Ok(false);
            }
            let c = color_of(rep, Arc { start, len })?;
            if same_color(colors[z], c) {
                return Ok(false);
            }
        } else {
            let c = color_of(rep, Arc { start, len })?;
            let x = (start + len) % n;
            if same_color(colors[x], c) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The consecutive arc covered by a set of punctures, if it is one.
fn arc_of(removed: &[usize], n: usize) -> Option<(usize, usize)> {
    let len = removed.len();
    let set: std::collections::BTreeSet<usize> = removed.iter().copied().collect();
    if set.len() != len {
        return None;
    }
    'starts: for &s in &set {
        // s is a start if s-1 is not in the set.
        if set.contains(&((s + n - 1) % n)) {
            continue;
        }
        for k in 0..len {
            if !set.contains(&((s + k) % n)) {
                continue 'starts;
            }
        }
        return Some((s, len));
    }
    None
}

/// Exhaustive search over all game plays; returns a winning log if one
/// exists. Feasible for small `n` (used as the test oracle).
pub fn exhaustive_game(rep: &DtRep) -> Result<Option<GameLog>, DtRepError> {
    let n = rep.n;
    for first in 0..n {
        let opening = vec![first, (first + 1) % n];
        let mut stack = vec![opening];
        while let Some(cur) = stack.pop() {
            if cur.len() == n - 2 {
                let log = GameLog { removed: cur, revisions: 0 };
                if game_wins(rep, &log)? {
                    return Ok(Some(log));
                }
                continue;
            }
            let (start, len) = arc_of(&cur, n).expect("constructed arcs are consecutive");
            for z in [(start + n - 1) % n, (start + len) % n] {
                let mut next = cur.clone();
                next.push(z);
                stack.push(next);
            }
        }
    }
    Ok(None)
}

/// Rewrite the generators so that the pants decomposition produced by the
/// game becomes the standard one: `b_j = (c'_1 ... c'_{j+1})^{-1}`.
///
/// Each new generator is a conjugate of an old one; removals on the
/// counterclockwise side pass through unchanged, removals on the clockwise
/// side are conjugated by the pants-curve element built so far.
pub fn standardize(rep: &DtRep, log: &GameLog) -> Result<DtRep, DtRepError> {
    rep.validate()?;
    let n = rep.n;
    if log.removed.len() != n - 2 {
        return Err(DtRepError::BadPunctureSet);
    }
    let gen = |p: usize| rep.gens[p];
    let mut new_gens: Vec<Isometry> = Vec::with_capacity(n);
    let mut new_alpha: Vec<f64> = Vec::with_capacity(n);
    new_gens.push(gen(log.removed[0]));
    new_alpha.push(rep.alpha[log.removed[0]]);
    new_gens.push(gen(log.removed[1]));
    new_alpha.push(rep.alpha[log.removed[1]]);
    // b_1 = (c'_2)^{-1} (c'_1)^{-1}
    let mut b = (new_gens[0] * new_gens[1]).inverse();
    for m in 2..n - 2 {
        let z = log.removed[m];
        let (start, _len) = arc_of(&log.removed[..m], n).expect("arc");
        let clockwise = z == (start + rep.n - 1) % rep.n;
        let c_new = if clockwise { b * gen(z) * b.inverse() } else { gen(z) };
        new_gens.push(c_new);
        new_alpha.push(rep.alpha[z]);
        b = c_new.inverse() * b;
    }
    // Last two punctures in counterclockwise order starting just past the arc.
    let (start, len) = arc_of(&log.removed, n).expect("arc");
    let x = (start + len) % n;
    let y = (x + 1) % n;
    new_gens.push(gen(x));
    new_alpha.push(rep.alpha[x]);
    new_gens.push(gen(y));
    new_alpha.push(rep.alpha[y]);
    let out = DtRep { n, alpha: new_alpha, gens: new_gens };
    out.validate()?;
    Ok(out)
}

/// The chain of fixed points of a standardized representation: `C_i` from
/// the generators, `B_i` from the partial products.
pub fn rep_chain(rep: &DtRep) -> Result<TriangleChain, DtRepError> {
    let n = rep.n;
    let c = rep.fixed_points()?;
    let mut b = Vec::with_capacity(n - 3);
    let mut acc = rep.gens[0];
    for i in 0..n - 3 {
        acc = acc * rep.gens[i + 1];
        let (fix, _) = hyp::elliptic_data(acc.inverse())
            .map_err(|_| DtRepError::NotElliptic { index: i })?;
        b.push(fix);
    }
    let mut triangles = Vec::with_capacity(n - 2);
    triangles.push(HTriangle::from_vertices([c[0], c[1], b[0]]));
    for i in 1..n - 3 {
        triangles.push(HTriangle::from_vertices([b[i - 1], c[i + 1], b[i]]));
    }
    triangles.push(HTriangle::from_vertices([b[n - 4], c[n - 2], c[n - 1]]));
    let chain = TriangleChain { c, b, triangles };
    chain.validate()?;
    Ok(chain)
}

/// Action-angle coordinates of a standardized representation.
pub fn rep_coords(rep: &DtRep) -> Result<ActionAngle, DtRepError> {
    let chain = rep_chain(rep)?;
    Ok(chains::read_coords(&chain, &rep.alpha)?)
}

/// Apply the twist automorphism along curve `i` `power` times: generators
/// `c_j` with `j >= i + 2` are conjugated by `b_i^{power}`. Positive powers
/// lower `gamma_i` by `beta_i` each, negative powers by `beta'_i`.
fn twist(rep: &DtRep, i: usize, power: i64) -> DtRep {
    let mut acc = Isometry::identity();
    for g in rep.gens.iter().take(i + 2) {
        acc = acc * *g;
    }
    let b = acc.inverse();
    let mut conj = Isometry::identity();
    let step = if power >= 0 { b } else { b.inverse() };
    for _ in 0..power.abs() {
        conj = conj * step;
    }
    let gens = rep
        .gens
        .iter()
        .enumerate()
        .map(|(j, g)| if j >= i + 2 { conj * *g * conj.inverse() } else { *g })
        .collect();
    DtRep { n: rep.n, alpha: rep.alpha.clone(), gens }
}

/// Change the generating set by twists along the pants curves until every
/// angle coordinate lies in `[0, pi)`. Other coordinates are untouched.
pub fn untwist(rep: &DtRep) -> Result<DtRep, DtRepError> {
    let pi = std::f64::consts::PI;
    let mut cur = rep.clone();
    let coords = rep_coords(&cur)?;
    for i in 0..cur.n - 3 {
        let gamma = rep_coords(&cur)?.gamma[i];
        if gamma < pi {
            continue;
        }
        let beta = coords.beta[i];
        let beta_prime = std::f64::consts::TAU - beta;
        // gamma - m step lands in [0, pi): one step size is always <= pi.
        let (step, sign) = if beta <= pi { (beta, 1) } else { (beta_prime, -1) };
        let m = ((gamma - pi) / step).floor() as i64 + 1;
        debug_assert!(m >= 1);
        cur = twist(&cur, i, sign * m);
        let new_gamma = rep_coords(&cur)?.gamma[i];
        debug_assert!(
            (0.0..pi).contains(&new_gamma),
            "untwist left gamma_{i} = {new_gamma}"
        );
    }
    cur.validate()?;
    Ok(cur)
}

/// Margin keeping synthesized slit angles strictly inside their ranges.
const SYNTH_MARGIN: f64 = 1e-6;

/// Build a northern hamantash assembly whose holonomy has the same
/// action-angle coordinates as `rep`.
///
/// The angle coordinate splits as `gamma_i = phi'_i + beta_i/2 - phi_i` with
/// `phi_i` in `(0, beta_i/2]` and `phi'_i` in `[0, beta'_i/2)`; the split is
/// the deterministic choice `phi'_i = min(gamma_i, beta'_i/2 - margin)`,
/// with the margin shrunk near `gamma_i = pi` where the feasible region
/// narrows. Slit lengths take half the tightest applicable bound.
pub fn synth(rep: &DtRep) -> Result<SamosaAssembly, DtRepError> {
    rep.validate()?;
    let log = play_game(rep)?;
    let std_rep = standardize(rep, &log)?;
    let untwisted = untwist(&std_rep)?;
    let coords = rep_coords(&untwisted)?;
    synth_from_coords(&coords)
}

/// The assembly-building step of [`synth`], starting from coordinates with
/// every `gamma_i` in `[0, pi)`.
pub fn synth_from_coords(coords: &ActionAngle) -> Result<SamosaAssembly, DtRepError> {
    let pi = std::f64::consts::PI;
    let n = coords.n;
    let mut curves = Vec::with_capacity(n - 3);
    for i in 0..n - 3 {
        let beta = coords.beta[i];
        let beta_prime = std::f64::consts::TAU - beta;
        let gamma = coords.gamma[i];
        debug_assert!((0.0..pi).contains(&gamma));
        let margin = SYNTH_MARGIN.min((pi - gamma) / 4.0).min(beta_prime / 8.0);
        let phi_prime = gamma.min(beta_prime / 2.0 - margin);
        let phi = beta / 2.0 - (gamma - phi_prime);
        debug_assert!(phi > 0.0 && phi <= beta / 2.0);
        debug_assert!((0.0..beta_prime / 2.0).contains(&phi_prime));
        curves.push(CurveParams {
            beta,
            ell: 1e-3,
            phi,
            phi_prime,
            hem_phi: Hemisphere::North,
            hem_phi_prime: Hemisphere::North,
        });
    }
    let mut assembly = SamosaAssembly { n, alpha: coords.alpha.clone(), curves };
    // ell = half the tightest bound over the two adjacent samosas.
    let mut bound = vec![f64::INFINITY; n - 3];
    for k in 1..=assembly.num_samosas() {
        let slits = assembly.slits_of(k).unwrap();
        let bounds = assembly.slit_bounds(k).unwrap();
        for (s, b) in slits.iter().zip(bounds) {
            let b = b.map_err(|_| DtRepError::ImpossiblePosition)?;
            if b < bound[s.curve] {
                bound[s.curve] = b;
            }
        }
    }
    for (c, b) in assembly.curves.iter_mut().zip(bound) {
        c.ell = 0.5 * b;
    }
    Ok(assembly)
}

/// Holonomy of a northern hamantash assembly, computed through the unfolded
/// net: the assembly is laid out in the plane, the intact hemispheres form a
/// triangle chain, and the chain's rotation tuple is the holonomy.
pub fn holonomy(assembly: &SamosaAssembly) -> Result<DtRep, DtRepError> {
    let net = crate::net::unfold(assembly).map_err(|_| DtRepError::ImpossiblePosition)?;
    let chain = net.chain;
    Ok(chains::chain_rep(&chain, &assembly.alpha)?)
}
