//! Randomized property suites shared by the CLI and the acceptance tests:
//! rotation additivity under planar composition, and preservation of
//! diagonality under compositions of basic operators.

use crate::complex::{closure_choices, Complex, DiagonalCheck};
use crate::khovanov::{crossing_complex, CrossingSign};
use crate::planar::{DiagramSpec, Endpoint, PlanarArcDiagram};
use crate::scalar::{fmt_q, Q};
use crate::smoothing::{BoundaryConfig, LoopSign, OrientedSmoothing, PointDir};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Result of one suite run.
#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// A uniformly random loopless smoothing on the boundary, with up to two
/// random loops attached.
pub fn random_smoothing(rng: &mut impl Rng, boundary: BoundaryConfig) -> OrientedSmoothing {
    let all = OrientedSmoothing::enumerate_loopless(boundary);
    let mut s = all[rng.gen_range(0..all.len())].clone();
    for _ in 0..rng.gen_range(0..=2) {
        let sign = if rng.gen_bool(0.5) {
            LoopSign::Pos
        } else {
            LoopSign::Neg
        };
        s = s.with_loop(sign).0;
    }
    s
}

/// A random connected alternating type-A diagram, built by splicing input
/// discs onto a growing boundary along single arcs and closing random
/// adjacent pairs with curls. Keeps at least one output point.
pub fn random_diagram(rng: &mut impl Rng, max_inputs: usize, max_k: usize) -> PlanarArcDiagram {
    // boundary slots: (disc index, point)
    let k0 = rng.gen_range(1..=max_k);
    let mut discs = vec![BoundaryConfig::new(k0)];
    let mut boundary: Vec<(usize, usize)> = (0..2 * k0).map(|p| (0, p)).collect();
    let mut arcs: Vec<(Endpoint, Endpoint)> = Vec::new();
    let slot_dir = |discs: &[BoundaryConfig], slot: (usize, usize)| discs[slot.0].dir(slot.1);

    let extra = rng.gen_range(0..max_inputs);
    for _ in 0..extra {
        let k = rng.gen_range(1..=max_k);
        let cfg = BoundaryConfig::new(k);
        let disc = discs.len();
        discs.push(cfg);
        let t = rng.gen_range(0..boundary.len());
        let anchor = boundary[t];
        // attach at a point with the opposite flag
        let candidates: Vec<usize> = (0..2 * k)
            .filter(|&p| cfg.dir(p) != slot_dir(&discs, anchor))
            .collect();
        let p = candidates[rng.gen_range(0..candidates.len())];
        arcs.push((
            Endpoint {
                circle: anchor.0 + 1,
                point: anchor.1,
            },
            Endpoint {
                circle: disc + 1,
                point: p,
            },
        ));
        let insert: Vec<(usize, usize)> = (1..2 * k).map(|j| (disc, (p + j) % (2 * k))).collect();
        boundary.splice(t..=t, insert);
    }
    // random curls closing adjacent slots
    while boundary.len() > 2 && rng.gen_bool(0.4) {
        let t = rng.gen_range(0..boundary.len());
        let a = boundary[t];
        let b = boundary[(t + 1) % boundary.len()];
        arcs.push((
            Endpoint {
                circle: a.0 + 1,
                point: a.1,
            },
            Endpoint {
                circle: b.0 + 1,
                point: b.1,
            },
        ));
        if (t + 1) % boundary.len() == 0 {
            boundary.remove(0);
            boundary.pop();
        } else {
            boundary.drain(t..=t + 1);
        }
    }
    // remaining slots become boundary arcs, starting at an In slot
    let offset = if slot_dir(&discs, boundary[0]) == PointDir::In {
        0
    } else {
        1
    };
    let n_out = boundary.len();
    for t in 0..n_out {
        let slot = boundary[(offset + t) % n_out];
        arcs.push((
            Endpoint { circle: 0, point: t },
            Endpoint {
                circle: slot.0 + 1,
                point: slot.1,
            },
        ));
    }
    let spec = DiagramSpec {
        output: BoundaryConfig::new(n_out / 2),
        inputs: discs,
        arcs,
        closure_sign: None,
    };
    PlanarArcDiagram::from_spec(&spec).expect("grown diagrams are valid")
}

/// Rotation additivity: the rotation number of every composite equals the
/// diagram's associated number plus the inputs' rotation numbers.
pub fn rotation_additivity_suite(seed: u64, cases: usize, max_k: usize) -> SuiteOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for case in 0..cases {
        let d = random_diagram(&mut rng, 3, max_k);
        let r_d = d.classify().r_d;
        let inputs: Vec<OrientedSmoothing> = d
            .inputs()
            .iter()
            .map(|&cfg| random_smoothing(&mut rng, cfg))
            .collect();
        let refs: Vec<&OrientedSmoothing> = inputs.iter().collect();
        match d.compose_smoothings(&refs) {
            Ok((composite, _)) => {
                let expected = inputs
                    .iter()
                    .fold(r_d.clone(), |acc, s| acc + s.rotation_number());
                let got = composite.rotation_number();
                if got != expected {
                    failures.push(format!(
                        "case {case}: rotation {} != expected {} (R_D = {})",
                        fmt_q(&got),
                        fmt_q(&expected),
                        fmt_q(&r_d)
                    ));
                }
            }
            Err(e) => failures.push(format!("case {case}: composition failed: {e}")),
        }
    }
    SuiteOutcome { cases, failures }
}

/// A random composite of crossing complexes through basic operators,
/// together with its predicted rotation constant.
pub fn random_basic_composite(
    rng: &mut impl Rng,
    max_k: usize,
    max_crossings: usize,
) -> (Complex, Q) {
    let sign = if rng.gen_bool(0.5) {
        CrossingSign::Negative
    } else {
        CrossingSign::Positive
    };
    let mut complex = crossing_complex(sign, true);
    let mut predicted = complex
        .is_diagonal()
        .constant()
        .cloned()
        .expect("crossing complexes are diagonal");
    let mut crossings = 1;
    let ops = rng.gen_range(0..=4);
    for _ in 0..ops {
        let k = complex.boundary().k();
        let glue_allowed = crossings < max_crossings && k + 1 <= max_k;
        let close_allowed = k >= 2;
        let do_glue = match (glue_allowed, close_allowed) {
            (true, true) => rng.gen_bool(0.6),
            (true, false) => true,
            (false, true) => false,
            (false, false) => break,
        };
        if do_glue {
            let sign = if rng.gen_bool(0.5) {
                CrossingSign::Negative
            } else {
                CrossingSign::Positive
            };
            let other = crossing_complex(sign, true);
            let p1 = rng.gen_range(0..2 * k);
            let cfg2 = BoundaryConfig::new(2);
            let targets: Vec<usize> = (0..4)
                .filter(|&p| cfg2.dir(p) != complex.boundary().dir(p1))
                .collect();
            let p2 = targets[rng.gen_range(0..targets.len())];
            let d = PlanarArcDiagram::binary_basic(k, 2, p1, p2)
                .expect("binary gluing positions are compatible");
            predicted =
                predicted + other.is_diagonal().constant().cloned().unwrap() - d.classify().r_d;
            complex = d
                .compose_complexes(&[&complex, &other])
                .expect("binary composite")
                .reduce();
            crossings += 1;
        } else {
            let choices = closure_choices(k);
            let c = choices[rng.gen_range(0..choices.len())];
            let d = PlanarArcDiagram::unary_basic(k, c.position, c.sign)
                .expect("closure positions are compatible");
            predicted = predicted - d.classify().r_d;
            complex = d
                .compose_complexes(&[&complex])
                .expect("unary composite")
                .reduce();
        }
    }
    (complex, predicted)
}

/// Compositions of coherently diagonal complexes through basic operators
/// stay diagonal with the additive constant.
pub fn theorem_one_suite(seed: u64, cases: usize) -> SuiteOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for case in 0..cases {
        let (complex, predicted) = random_basic_composite(&mut rng, 4, 6);
        match complex.is_diagonal() {
            DiagonalCheck::Constant(c) if c == predicted => {}
            DiagonalCheck::Constant(c) => failures.push(format!(
                "case {case}: constant {} != predicted {}",
                fmt_q(&c),
                fmt_q(&predicted)
            )),
            other => failures.push(format!(
                "case {case}: not diagonal ({other:?}), predicted {}",
                fmt_q(&predicted)
            )),
        }
    }
    SuiteOutcome { cases, failures }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_suite_small() {
        let outcome = rotation_additivity_suite(7, 60, 3);
        assert!(outcome.passed(), "failures: {:?}", outcome.failures);
    }

    #[test]
    fn theorem_one_suite_small() {
        let outcome = theorem_one_suite(11, 25);
        assert!(outcome.passed(), "failures: {:?}", outcome.failures);
    }

    #[test]
    fn random_diagrams_classify() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let d = random_diagram(&mut rng, 3, 3);
            let c = d.classify();
            // the rotation associated number is a half-integer
            assert!(crate::scalar::is_half_integral(&c.r_d));
            assert_eq!(c.curls + c.interconnecting, c.i_d);
        }
    }
}
