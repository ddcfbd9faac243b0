//! Dotted cobordisms between oriented smoothings, kept in a normal form
//! compatible with the local relations of the quotient category: spheres
//! evaluate to 0, dotted spheres to 1, components with two dots vanish, and
//! necks are cut so that every surviving component is a dotted disk.
//!
//! A cobordism is stored as a partition of the source strings, target
//! strings and vertical boundary lines into connected components, each with
//! an Euler characteristic and a dot count. Connectivity is all that
//! matters in the quotient; embeddings are not recorded.

use crate::scalar::{q, Q};
use crate::smoothing::{OrientedSmoothing, StringId};
use crate::util::UnionFind;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CobordismError {
    #[error("source and target have different boundary configurations")]
    BoundaryMismatch,
    #[error("components do not partition the strings of source and target")]
    BadPartition,
    #[error("boundary point {0} has its bottom and top strands in different components")]
    SplitBoundaryLine(usize),
    #[error("component has impossible topology (euler={euler}, circles={circles})")]
    BadTopology { euler: i64, circles: usize },
    #[error("cobordism shape does not match the requested elementary kind")]
    ShapeMismatch,
    #[error("composition expects equal middle smoothings")]
    MiddleMismatch,
}

/// One connected piece of a cobordism surface.
#[derive(
    Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub struct CobComponent {
    /// Source strings in this component (sorted).
    pub bottom: Vec<StringId>,
    /// Target strings in this component (sorted).
    pub top: Vec<StringId>,
    /// Euler characteristic of the surface piece.
    pub euler: i64,
    /// Number of dots carried by the piece.
    pub dots: u32,
}

impl CobComponent {
    pub fn new(mut bottom: Vec<StringId>, mut top: Vec<StringId>, euler: i64, dots: u32) -> Self {
        bottom.sort();
        top.sort();
        Self {
            bottom,
            top,
            euler,
            dots,
        }
    }

    pub fn is_closed(&self) -> bool {
        self.bottom.is_empty() && self.top.is_empty()
    }
}

/// A single dotted cobordism in component normal form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cobordism {
    source: OrientedSmoothing,
    target: OrientedSmoothing,
    comps: Vec<CobComponent>,
}

/// A boundary circle of a component, as the set of strings it traverses.
/// Either a single closed loop of the source or target, or an alternating
/// cycle of bottom and top strands joined by vertical lines.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct BoundaryCircle {
    bottom: Vec<StringId>,
    top: Vec<StringId>,
}

impl Cobordism {
    pub fn new(
        source: OrientedSmoothing,
        target: OrientedSmoothing,
        comps: Vec<CobComponent>,
    ) -> Result<Self, CobordismError> {
        if source.boundary() != target.boundary() {
            return Err(CobordismError::BoundaryMismatch);
        }
        let mut bottom_seen: Vec<StringId> = Vec::new();
        let mut top_seen: Vec<StringId> = Vec::new();
        for c in &comps {
            bottom_seen.extend_from_slice(&c.bottom);
            top_seen.extend_from_slice(&c.top);
        }
        bottom_seen.sort();
        top_seen.sort();
        if bottom_seen != source.string_ids() || top_seen != target.string_ids() {
            return Err(CobordismError::BadPartition);
        }
        for p in 0..source.boundary().points() {
            let bs = StringId::Strand(source.strand_at(p));
            let ts = StringId::Strand(target.strand_at(p));
            let ci = comps.iter().position(|c| c.bottom.contains(&bs));
            let cj = comps.iter().position(|c| c.top.contains(&ts));
            if ci != cj {
                return Err(CobordismError::SplitBoundaryLine(p));
            }
        }
        let mut cob = Self {
            source,
            target,
            comps,
        };
        for c in &cob.comps {
            let b = cob.circles_of(c).len();
            let two_g = 2 - c.euler - b as i64;
            if two_g < 0 || two_g % 2 != 0 || (b > 0 && c.euler > 1) || c.euler > 2 {
                return Err(CobordismError::BadTopology {
                    euler: c.euler,
                    circles: b,
                });
            }
        }
        cob.comps.sort();
        Ok(cob)
    }

    /// The identity cobordism in raw form: one curtain per string.
    pub fn identity(s: &OrientedSmoothing) -> Self {
        let mut comps = Vec::new();
        for (i, _) in s.strands().iter().enumerate() {
            comps.push(CobComponent::new(
                vec![StringId::Strand(i)],
                vec![StringId::Strand(i)],
                1,
                0,
            ));
        }
        for (i, _) in s.loops().iter().enumerate() {
            comps.push(CobComponent::new(
                vec![StringId::Loop(i)],
                vec![StringId::Loop(i)],
                0,
                0,
            ));
        }
        Self::new(s.clone(), s.clone(), comps).expect("identity is always valid")
    }

    pub fn source(&self) -> &OrientedSmoothing {
        &self.source
    }

    pub fn target(&self) -> &OrientedSmoothing {
        &self.target
    }

    pub fn components(&self) -> &[CobComponent] {
        &self.comps
    }

    pub fn dots_total(&self) -> u32 {
        self.comps.iter().map(|c| c.dots).sum()
    }

    pub fn euler_total(&self) -> i64 {
        self.comps.iter().map(|c| c.euler).sum()
    }

    /// Boundary circles of one component, traced through the strands and
    /// vertical lines; each closed loop contributes its own circle.
    fn circles_of(&self, comp: &CobComponent) -> Vec<BoundaryCircle> {
        let mut circles = Vec::new();
        for id in &comp.bottom {
            if let StringId::Loop(_) = id {
                circles.push(BoundaryCircle {
                    bottom: vec![*id],
                    top: vec![],
                });
            }
        }
        for id in &comp.top {
            if let StringId::Loop(_) = id {
                circles.push(BoundaryCircle {
                    bottom: vec![],
                    top: vec![*id],
                });
            }
        }
        // trace strand circles: points of the component, connected through
        // bottom strands and top strands
        let points: Vec<usize> = (0..self.source.boundary().points())
            .filter(|&p| {
                comp.bottom
                    .contains(&StringId::Strand(self.source.strand_at(p)))
            })
            .collect();
        if points.is_empty() {
            circles.sort();
            return circles;
        }
        let index_of = |p: usize| points.iter().position(|&x| x == p).unwrap();
        let mut uf = UnionFind::new(points.len());
        for &p in &points {
            let (bs, be) = self.source.strands()[self.source.strand_at(p)];
            let other = if bs == p { be } else { bs };
            uf.union(index_of(p), index_of(other));
            let (ts, te) = self.target.strands()[self.target.strand_at(p)];
            let other = if ts == p { te } else { ts };
            uf.union(index_of(p), index_of(other));
        }
        for class in uf.classes() {
            let mut bottom: Vec<StringId> = class
                .iter()
                .map(|&i| StringId::Strand(self.source.strand_at(points[i])))
                .collect();
            let mut top: Vec<StringId> = class
                .iter()
                .map(|&i| StringId::Strand(self.target.strand_at(points[i])))
                .collect();
            bottom.sort();
            bottom.dedup();
            top.sort();
            top.dedup();
            circles.push(BoundaryCircle { bottom, top });
        }
        circles.sort();
        circles
    }

    /// Number of boundary circles of a component.
    pub fn boundary_circles(&self, comp: &CobComponent) -> usize {
        self.circles_of(comp).len()
    }

    /// Degree of this single cobordism: total euler minus k minus twice the
    /// number of dots (grading shifts are added by the caller).
    pub fn degree(&self) -> i64 {
        self.euler_total() - self.source.boundary().k() as i64 - 2 * self.dots_total() as i64
    }

    /// True if every component is a dotless curtain over a single strand or
    /// loop, with matching ids on both sides.
    fn is_identity_shape(&self) -> bool {
        if self.source != self.target {
            return false;
        }
        self.comps.iter().all(|c| {
            c.dots == 0
                && c.bottom.len() == 1
                && c.top == c.bottom
                && match c.bottom[0] {
                    StringId::Strand(_) => c.euler == 1,
                    StringId::Loop(_) => c.euler == 0,
                }
        })
    }
}

impl fmt::Display for Cobordism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} => {}:", self.source, self.target)?;
        for c in &self.comps {
            write!(
                f,
                " {{{:?}|{:?} e={} d={}}}",
                c.bottom, c.top, c.euler, c.dots
            )?;
        }
        write!(f, "]")
    }
}

/// Rational linear combination of cobordisms sharing a source and target.
/// Kept in normal form: every component of every key is a dotted disk (or a
/// curtain over a strand), keys are distinct and coefficients nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "ComboRepr", try_from = "ComboRepr")]
pub struct MorphismCombo {
    source: OrientedSmoothing,
    target: OrientedSmoothing,
    terms: BTreeMap<Cobordism, Q>,
}

/// Serialization mirror: terms in canonical (sorted) order, coefficients as
/// strings like `"-1/2"`.
#[derive(Serialize, Deserialize)]
struct ComboRepr {
    source: OrientedSmoothing,
    target: OrientedSmoothing,
    terms: Vec<(Cobordism, String)>,
}

impl From<MorphismCombo> for ComboRepr {
    fn from(m: MorphismCombo) -> Self {
        ComboRepr {
            source: m.source,
            target: m.target,
            terms: m
                .terms
                .into_iter()
                .map(|(c, v)| (c, crate::scalar::fmt_q(&v)))
                .collect(),
        }
    }
}

impl TryFrom<ComboRepr> for MorphismCombo {
    type Error = String;

    fn try_from(r: ComboRepr) -> Result<Self, String> {
        let mut terms = BTreeMap::new();
        for (c, v) in r.terms {
            let coeff: Q = v.parse().map_err(|e| format!("bad coefficient {v:?}: {e}"))?;
            if c.source != r.source || c.target != r.target {
                return Err("term endpoints disagree with the combo".into());
            }
            terms.insert(c, coeff);
        }
        Ok(MorphismCombo {
            source: r.source,
            target: r.target,
            terms,
        })
    }
}

impl MorphismCombo {
    pub fn zero(source: OrientedSmoothing, target: OrientedSmoothing) -> Self {
        Self {
            source,
            target,
            terms: BTreeMap::new(),
        }
    }

    /// Wraps a single cobordism with coefficient 1 and normalizes.
    pub fn from_cobordism(c: Cobordism) -> Self {
        Self::from_terms(
            c.source.clone(),
            c.target.clone(),
            vec![(c, q(1))],
        )
    }

    pub fn from_terms(
        source: OrientedSmoothing,
        target: OrientedSmoothing,
        terms: Vec<(Cobordism, Q)>,
    ) -> Self {
        let mut combo = Self::zero(source, target);
        for (c, coeff) in terms {
            combo.accumulate(c, coeff);
        }
        combo.normalize()
    }

    /// The identity morphism of `s` (in normal form).
    pub fn identity(s: &OrientedSmoothing) -> Self {
        Self::from_cobordism(Cobordism::identity(s))
    }

    pub fn source(&self) -> &OrientedSmoothing {
        &self.source
    }

    pub fn target(&self) -> &OrientedSmoothing {
        &self.target
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Cobordism, &Q)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    fn accumulate(&mut self, key: Cobordism, coeff: Q) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(|| q(0));
        *entry += coeff;
        if entry.is_zero() {
            // re-borrowing to remove: find the zero entry
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.source, other.source);
        debug_assert_eq!(self.target, other.target);
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.accumulate(k.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.accumulate(k.clone(), -v.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.source.clone(), self.target.clone());
        }
        let terms = self
            .terms
            .iter()
            .map(|(k, v)| (k.clone(), v * c))
            .collect();
        Self {
            source: self.source.clone(),
            target: self.target.clone(),
            terms,
        }
    }

    /// Rewrites every term by the local relations: genus is traded for dots
    /// (a handle is worth two dots, with a factor of 2 per handle), necks are
    /// cut until every component is a disk, components with two dots are
    /// dropped, dotted spheres evaluate to 1 and plain spheres to 0.
    pub fn normalize(&self) -> Self {
        let mut out = Self::zero(self.source.clone(), self.target.clone());
        for (cob, coeff) in &self.terms {
            for (comps, factor) in normalize_components(cob) {
                let key = Cobordism {
                    source: cob.source.clone(),
                    target: cob.target.clone(),
                    comps,
                };
                out.accumulate(key, coeff * factor);
            }
        }
        out
    }

    /// Vertical composition `self` after `first` (so `first: A -> B`,
    /// `self: B -> C`). Bilinear; per pair of terms, components sharing a
    /// middle string merge, Euler characteristics add and lose the Euler
    /// characteristic of every glued middle string, dots add.
    pub fn compose(&self, first: &Self) -> Result<Self, CobordismError> {
        if first.target != self.source {
            return Err(CobordismError::MiddleMismatch);
        }
        let mut out = Self::zero(first.source.clone(), self.target.clone());
        for (g, cg) in &self.terms {
            for (f, cf) in &first.terms {
                let glued = glue_vertical(g, f);
                out.accumulate(glued, cg * cf);
            }
        }
        Ok(out.normalize())
    }

    /// Common degree of the combo including shifts, if homogeneous.
    pub fn degree(&self, source_shift: i64, target_shift: i64) -> DegreeCheck {
        let mut result: Option<i64> = None;
        for (cob, _) in &self.terms {
            let d = cob.degree() + target_shift - source_shift;
            match result {
                None => result = Some(d),
                Some(prev) if prev != d => return DegreeCheck::NonHomogeneous,
                _ => {}
            }
        }
        match result {
            None => DegreeCheck::ZeroMorphism,
            Some(d) => DegreeCheck::Homogeneous(d),
        }
    }

    /// True iff this is a nonzero scalar multiple of the identity cobordism.
    pub fn is_invertible_entry(&self) -> bool {
        self.invertible_scalar().is_some()
    }

    /// The scalar `c` such that `self = c * identity`, when of that form.
    /// Smoothings with loops have a multi-term identity normal form; entries
    /// eligible for Gaussian elimination are loopless, so a single identity-
    /// shaped term suffices here.
    pub fn invertible_scalar(&self) -> Option<Q> {
        if self.terms.len() != 1 || self.source != self.target || self.source.has_loops() {
            return None;
        }
        let (cob, coeff) = self.terms.iter().next().unwrap();
        if cob.is_identity_shape() && !coeff.is_zero() {
            Some(coeff.clone())
        } else {
            None
        }
    }

    /// For morphisms between empty smoothings: the coefficient of the empty
    /// cobordism.
    pub fn scalar_part(&self) -> Q {
        for (cob, coeff) in &self.terms {
            if cob.comps.is_empty() {
                return coeff.clone();
            }
        }
        q(0)
    }
}

impl fmt::Display for MorphismCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (cob, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*{}", crate::scalar::fmt_q(c), cob)?;
        }
        Ok(())
    }
}

/// Result of a degree computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeCheck {
    ZeroMorphism,
    Homogeneous(i64),
    NonHomogeneous,
}

impl DegreeCheck {
    pub fn is_zero_degree(&self) -> bool {
        matches!(self, DegreeCheck::ZeroMorphism | DegreeCheck::Homogeneous(0))
    }
}

/// Normal form of the component multiset of one cobordism, as a sum of
/// (component list, scalar factor) alternatives.
fn normalize_components(cob: &Cobordism) -> Vec<(Vec<CobComponent>, Q)> {
    // per component: list of (disk components, factor) alternatives
    let mut alternatives: Vec<Vec<(Vec<CobComponent>, Q)>> = Vec::new();
    for comp in &cob.comps {
        let circles = cob.circles_of(comp);
        let b = circles.len() as i64;
        let genus = (2 - comp.euler - b) / 2;
        debug_assert!(genus >= 0 && (2 - comp.euler - b) % 2 == 0);
        let factor = q(1 << genus.min(62));
        let dots = comp.dots + genus as u32;
        if b == 0 {
            // closed component: sphere after genus reduction
            if dots == 1 {
                alternatives.push(vec![(vec![], factor)]);
            } else {
                // plain sphere or two dots: the whole term vanishes
                return Vec::new();
            }
            continue;
        }
        if dots >= 2 {
            return Vec::new();
        }
        let disks: Vec<CobComponent> = circles
            .iter()
            .map(|c| CobComponent::new(c.bottom.clone(), c.top.clone(), 1, 0))
            .collect();
        if dots == 1 {
            // all disks dotted
            let dotted = disks
                .iter()
                .map(|d| CobComponent { dots: 1, ..d.clone() })
                .collect();
            alternatives.push(vec![(dotted, factor)]);
        } else {
            // exactly one undotted disk, the rest dotted
            let mut options = Vec::new();
            for undotted in 0..disks.len() {
                let opt = disks
                    .iter()
                    .enumerate()
                    .map(|(i, d)| CobComponent {
                        dots: if i == undotted { 0 } else { 1 },
                        ..d.clone()
                    })
                    .collect();
                options.push((opt, factor.clone()));
            }
            alternatives.push(options);
        }
    }
    // cartesian product of the alternatives
    let mut result: Vec<(Vec<CobComponent>, Q)> = vec![(Vec::new(), q(1))];
    for alt in alternatives {
        let mut next = Vec::with_capacity(result.len() * alt.len());
        for (comps, factor) in &result {
            for (extra, f2) in &alt {
                let mut c = comps.clone();
                c.extend(extra.iter().cloned());
                next.push((c, factor * f2));
            }
        }
        result = next;
    }
    for (comps, _) in &mut result {
        comps.sort();
    }
    result
}

/// Glues `g` on top of `f` (raw, un-normalized).
fn glue_vertical(g: &Cobordism, f: &Cobordism) -> Cobordism {
    let middle = &f.target;
    let nf = f.comps.len();
    let ng = g.comps.len();
    let mut uf = UnionFind::new(nf + ng);
    // glue along every middle string
    for id in middle.string_ids() {
        let fi = f
            .comps
            .iter()
            .position(|c| c.top.contains(&id))
            .expect("middle string in some f component");
        let gi = g
            .comps
            .iter()
            .position(|c| c.bottom.contains(&id))
            .expect("middle string in some g component");
        uf.union(fi, nf + gi);
    }
    let mut comps = Vec::new();
    for class in uf.classes() {
        let mut bottom = Vec::new();
        let mut top = Vec::new();
        let mut euler = 0i64;
        let mut dots = 0u32;
        let mut glued_chi = 0i64;
        for &idx in &class {
            if idx < nf {
                let c = &f.comps[idx];
                bottom.extend_from_slice(&c.bottom);
                euler += c.euler;
                dots += c.dots;
                for id in &c.top {
                    glued_chi += match id {
                        StringId::Strand(_) => 1,
                        StringId::Loop(_) => 0,
                    };
                }
            } else {
                let c = &g.comps[idx - nf];
                top.extend_from_slice(&c.top);
                euler += c.euler;
                dots += c.dots;
            }
        }
        comps.push(CobComponent::new(bottom, top, euler - glued_chi, dots));
    }
    comps.sort();
    Cobordism {
        source: f.source.clone(),
        target: g.target.clone(),
        comps,
    }
}

/// Elementary cobordism constructors.
pub mod elementary {
    use super::*;
    use crate::smoothing::LoopSign;

    /// Cap: kills the loop `loop_idx` of `source` with a disk carrying
    /// `dots` dots; all other strings become curtains.
    pub fn cap(source: &OrientedSmoothing, loop_idx: usize, dots: u32) -> MorphismCombo {
        let target = source.without_loop(loop_idx);
        let mut comps = curtains_excluding_loop(source, &target, loop_idx);
        comps.push(CobComponent::new(
            vec![StringId::Loop(loop_idx)],
            vec![],
            1,
            dots,
        ));
        MorphismCombo::from_cobordism(
            Cobordism::new(source.clone(), target, comps).expect("cap is valid"),
        )
    }

    /// Cup: births the loop `loop_idx` of `target` from a disk carrying
    /// `dots` dots.
    pub fn cup(target: &OrientedSmoothing, loop_idx: usize, dots: u32) -> MorphismCombo {
        let source = target.without_loop(loop_idx);
        let mut comps = curtains_excluding_loop(target, &source, loop_idx)
            .into_iter()
            .map(|c| CobComponent::new(c.top, c.bottom, c.euler, c.dots))
            .collect::<Vec<_>>();
        comps.push(CobComponent::new(
            vec![],
            vec![StringId::Loop(loop_idx)],
            1,
            dots,
        ));
        MorphismCombo::from_cobordism(
            Cobordism::new(source, target.clone(), comps).expect("cup is valid"),
        )
    }

    /// Creates a loop of the given sign on a smoothing and returns the cup
    /// morphism together with the enlarged smoothing.
    pub fn birth(base: &OrientedSmoothing, sign: LoopSign) -> (OrientedSmoothing, MorphismCombo) {
        let (with, idx) = base.with_loop(sign);
        let m = cup(&with, idx, 0);
        (with, m)
    }

    /// Identity with one dot on the curtain over `string`.
    pub fn dotted_identity(s: &OrientedSmoothing, string: StringId) -> MorphismCombo {
        let raw = Cobordism::identity(s);
        let comps = raw
            .comps
            .iter()
            .map(|c| {
                if c.bottom == vec![string] {
                    CobComponent { dots: 1, ..c.clone() }
                } else {
                    c.clone()
                }
            })
            .collect();
        MorphismCombo::from_cobordism(
            Cobordism::new(s.clone(), s.clone(), comps).expect("dotted identity is valid"),
        )
    }

    /// Saddle: one component containing the given source and target strings
    /// (a single band move), curtains elsewhere. The remaining strands must
    /// agree between source and target; remaining loops are matched in
    /// canonical order.
    pub fn saddle(
        source: &OrientedSmoothing,
        target: &OrientedSmoothing,
        bottom: &[StringId],
        top: &[StringId],
    ) -> Result<MorphismCombo, CobordismError> {
        if source.boundary() != target.boundary() {
            return Err(CobordismError::BoundaryMismatch);
        }
        let rest_bottom: Vec<StringId> = source
            .string_ids()
            .into_iter()
            .filter(|id| !bottom.contains(id))
            .collect();
        let rest_top: Vec<StringId> = target
            .string_ids()
            .into_iter()
            .filter(|id| !top.contains(id))
            .collect();
        // remaining strands must be literally equal point-pairs
        let rb_strands: Vec<(usize, usize)> = rest_bottom
            .iter()
            .filter_map(|id| match id {
                StringId::Strand(i) => Some(source.strands()[*i]),
                _ => None,
            })
            .collect();
        let rt_strands: Vec<(usize, usize)> = rest_top
            .iter()
            .filter_map(|id| match id {
                StringId::Strand(i) => Some(target.strands()[*i]),
                _ => None,
            })
            .collect();
        if rb_strands != rt_strands {
            return Err(CobordismError::ShapeMismatch);
        }
        let rb_loops: Vec<StringId> = rest_bottom
            .iter()
            .filter(|id| matches!(id, StringId::Loop(_)))
            .cloned()
            .collect();
        let rt_loops: Vec<StringId> = rest_top
            .iter()
            .filter(|id| matches!(id, StringId::Loop(_)))
            .cloned()
            .collect();
        if rb_loops.len() != rt_loops.len() {
            return Err(CobordismError::ShapeMismatch);
        }
        let mut comps = Vec::new();
        let rb_strand_ids = rest_bottom
            .iter()
            .filter(|id| matches!(id, StringId::Strand(_)));
        let rt_strand_ids = rest_top
            .iter()
            .filter(|id| matches!(id, StringId::Strand(_)));
        for (b, t) in rb_strand_ids.zip(rt_strand_ids) {
            comps.push(CobComponent::new(vec![*b], vec![*t], 1, 0));
        }
        for (b, t) in rb_loops.iter().zip(rt_loops.iter()) {
            comps.push(CobComponent::new(vec![*b], vec![*t], 0, 0));
        }
        // the saddle piece: euler = sum of bottom euler - 1 = sum of top - 1
        let chi = |ids: &[StringId]| -> i64 {
            ids.iter()
                .map(|id| match id {
                    StringId::Strand(_) => 1,
                    StringId::Loop(_) => 0,
                })
                .sum()
        };
        let e = chi(bottom) - 1;
        if e != chi(top) - 1 {
            return Err(CobordismError::ShapeMismatch);
        }
        comps.push(CobComponent::new(bottom.to_vec(), top.to_vec(), e, 0));
        let cob = Cobordism::new(source.clone(), target.clone(), comps)
            .map_err(|_| CobordismError::ShapeMismatch)?;
        Ok(MorphismCombo::from_cobordism(cob))
    }

    fn curtains_excluding_loop(
        from: &OrientedSmoothing,
        to: &OrientedSmoothing,
        skip: usize,
    ) -> Vec<CobComponent> {
        let mut comps = Vec::new();
        for (i, _) in from.strands().iter().enumerate() {
            comps.push(CobComponent::new(
                vec![StringId::Strand(i)],
                vec![StringId::Strand(i)],
                1,
                0,
            ));
        }
        for (j, _) in from.loops().iter().enumerate() {
            if j == skip {
                continue;
            }
            let other = if j < skip { j } else { j - 1 };
            debug_assert!(other < to.loops().len());
            comps.push(CobComponent::new(
                vec![StringId::Loop(j)],
                vec![StringId::Loop(other)],
                0,
                0,
            ));
        }
        comps
    }
}

#[cfg(test)]
mod tests {
    use super::elementary::*;
    use super::*;
    use crate::scalar::qr;
    use crate::smoothing::LoopSign;

    fn circle() -> OrientedSmoothing {
        OrientedSmoothing::single_loop(LoopSign::Pos)
    }

    fn empty() -> OrientedSmoothing {
        OrientedSmoothing::empty()
    }

    #[test]
    fn identity_of_empty() {
        let id = MorphismCombo::identity(&empty());
        assert_eq!(id.term_count(), 1);
        assert_eq!(id.scalar_part(), q(1));
        assert!(id.is_invertible_entry());
    }

    #[test]
    fn identity_of_strand() {
        let s = OrientedSmoothing::new(1, &[(0, 1)], &[]).unwrap();
        let id = MorphismCombo::identity(&s);
        assert_eq!(id.term_count(), 1);
        assert!(id.is_invertible_entry());
        assert!(matches!(id.degree(0, 0), DegreeCheck::Homogeneous(0)));
        let comp = id.compose(&id).unwrap();
        assert_eq!(comp, id);
    }

    #[test]
    fn identity_of_loop_is_neck_cut_and_idempotent() {
        let id = MorphismCombo::identity(&circle());
        // the annulus neck-cuts into two dotted-disk terms
        assert_eq!(id.term_count(), 2);
        let comp = id.compose(&id).unwrap();
        assert_eq!(comp, id);
        // not a single-term scalar identity, so not an elimination pivot
        assert!(!id.is_invertible_entry());
    }

    #[test]
    fn sphere_relations() {
        // cup then cap with one dot in total = 1 on the empty smoothing
        let birth = cup(&circle(), 0, 0);
        let death_dotted = cap(&circle(), 0, 1);
        let sphere_dotted = death_dotted.compose(&birth).unwrap();
        assert_eq!(sphere_dotted.scalar_part(), q(1));
        assert_eq!(sphere_dotted.term_count(), 1);

        // no dots: sphere = 0
        let death = cap(&circle(), 0, 0);
        let sphere = death.compose(&birth).unwrap();
        assert!(sphere.is_zero());

        // two dots: 0
        let sphere2 = cap(&circle(), 0, 1).compose(&cup(&circle(), 0, 1)).unwrap();
        assert!(sphere2.is_zero());
    }

    #[test]
    fn torus_evaluates_to_two() {
        // cup, split into two circles, merge back, cap: a closed torus
        let one = circle();
        let two = OrientedSmoothing::new(0, &[], &[LoopSign::Pos, LoopSign::Pos]).unwrap();
        let split = saddle(
            &one,
            &two,
            &[StringId::Loop(0)],
            &[StringId::Loop(0), StringId::Loop(1)],
        )
        .unwrap();
        let merge = saddle(
            &two,
            &one,
            &[StringId::Loop(0), StringId::Loop(1)],
            &[StringId::Loop(0)],
        )
        .unwrap();
        let torus = cap(&one, 0, 0)
            .compose(&merge)
            .unwrap()
            .compose(&split)
            .unwrap()
            .compose(&cup(&one, 0, 0))
            .unwrap();
        assert_eq!(torus.scalar_part(), q(2));
        assert_eq!(torus.term_count(), 1);
    }

    #[test]
    fn direct_torus_component_normalizes_to_two() {
        let raw = Cobordism::new(
            empty(),
            empty(),
            vec![CobComponent::new(vec![], vec![], 0, 0)],
        )
        .unwrap();
        let m = MorphismCombo::from_cobordism(raw);
        assert_eq!(m.scalar_part(), q(2));
    }

    #[test]
    fn neck_cutting_identity() {
        let id = MorphismCombo::identity(&circle());
        let lhs = cup(&circle(), 0, 0)
            .compose(&cap(&circle(), 0, 1))
            .unwrap()
            .add(&cup(&circle(), 0, 1).compose(&cap(&circle(), 0, 0)).unwrap());
        assert_eq!(id, lhs.normalize());
    }

    #[test]
    fn composition_is_associative_on_samples() {
        let one = circle();
        let two = OrientedSmoothing::new(0, &[], &[LoopSign::Pos, LoopSign::Pos]).unwrap();
        let split = saddle(
            &one,
            &two,
            &[StringId::Loop(0)],
            &[StringId::Loop(0), StringId::Loop(1)],
        )
        .unwrap();
        let merge = saddle(
            &two,
            &one,
            &[StringId::Loop(0), StringId::Loop(1)],
            &[StringId::Loop(0)],
        )
        .unwrap();
        let death = cap(&one, 0, 0);
        let a = death.compose(&merge.compose(&split).unwrap()).unwrap();
        let b = death.compose(&merge).unwrap().compose(&split).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn degree_is_additive() {
        let one = circle();
        let birth = cup(&one, 0, 0);
        let death = cap(&one, 0, 1);
        let d1 = match birth.degree(0, 0) {
            DegreeCheck::Homogeneous(d) => d,
            _ => panic!(),
        };
        let d2 = match death.degree(0, 0) {
            DegreeCheck::Homogeneous(d) => d,
            _ => panic!(),
        };
        let comp = death.compose(&birth).unwrap();
        match comp.degree(0, 0) {
            DegreeCheck::Homogeneous(d) => assert_eq!(d, d1 + d2),
            _ => panic!("composite should be homogeneous"),
        }
        assert_eq!(d1, 1);
        assert_eq!(d2, -1);
    }

    #[test]
    fn saddle_on_four_points() {
        let a = OrientedSmoothing::new(2, &[(0, 1), (2, 3)], &[]).unwrap();
        let b = OrientedSmoothing::new(2, &[(0, 3), (2, 1)], &[]).unwrap();
        let m = saddle(
            &a,
            &b,
            &[StringId::Strand(0), StringId::Strand(1)],
            &[StringId::Strand(0), StringId::Strand(1)],
        )
        .unwrap();
        assert_eq!(m.term_count(), 1);
        let (cob, _) = m.terms().next().unwrap();
        assert_eq!(cob.components().len(), 1);
        assert_eq!(cob.components()[0].euler, 1);
        assert_eq!(cob.boundary_circles(&cob.components()[0]), 1);
        // saddle has degree -1 before shifts: euler 1 - k 2
        assert!(matches!(m.degree(0, 0), DegreeCheck::Homogeneous(-1)));
        assert!(matches!(m.degree(-2, -1), DegreeCheck::Homogeneous(0)));
        assert!(!m.is_invertible_entry());
    }

    #[test]
    fn curtain_circle_counts() {
        let s = OrientedSmoothing::new(1, &[(0, 1)], &[LoopSign::Pos]).unwrap();
        let raw = Cobordism::identity(&s);
        for c in raw.components() {
            match c.bottom[0] {
                StringId::Strand(_) => assert_eq!(raw.boundary_circles(c), 1),
                StringId::Loop(_) => assert_eq!(raw.boundary_circles(c), 2),
            }
        }
    }

    #[test]
    fn half_identity_is_invertible() {
        let s = OrientedSmoothing::new(1, &[(0, 1)], &[]).unwrap();
        let half = MorphismCombo::identity(&s).scale(&qr(1, 2));
        assert_eq!(half.invertible_scalar(), Some(qr(1, 2)));
    }
}
