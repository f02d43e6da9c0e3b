use super::*;
use crate::generators::{generate, random_complex, seeded_rng, triangulated_band, GeneratorSpec};
use crate::linalg::det_exact;
use crate::operators::{complex_connection_laplacian, cycle_rotation, Automorphism};
use crate::parse_ring_expression;
use crate::ring::ring_mul;
use num_bigint::BigInt;
use num_rational::Rational64;

fn el(s: &str) -> RingElement {
    parse_ring_expression(s).unwrap()
}

fn cx(spec: GeneratorSpec) -> SimplicialComplex {
    generate(&spec).unwrap()
}

fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn random_pairs(seed: u64, count: usize, max_cells: usize) -> Vec<(SimplicialComplex, SimplicialComplex)> {
    let mut rng = seeded_rng(seed);
    (0..count).map(|_| (random_complex(&mut rng, max_cells), random_complex(&mut rng, max_cells))).collect()
}

#[test]
fn euler_examples() {
    assert_eq!(euler_characteristic(&el("C4")), 0);
    assert_eq!(euler_characteristic(&el("C4 - 2*K3 + L2*L3")), -1);
    for (a, b) in random_pairs(11, 25, 12) {
        let ab = ring_mul(&RingElement::from_complex(a.clone()), &RingElement::from_complex(b.clone()));
        assert_eq!(euler_characteristic(&ab), a.euler_characteristic() * b.euler_characteristic());
    }
}

#[test]
fn euler_matches_stanley_reisner() {
    let mut rng = seeded_rng(3);
    for _ in 0..20 {
        let a = RingElement::from_complex(random_complex(&mut rng, 10));
        let b = RingElement::from_complex(random_complex(&mut rng, 8));
        let e = crate::ring::ring_add(&ring_mul(&a, &b), &crate::ring::ring_neg(&b));
        assert_eq!(euler_characteristic(&e), crate::stanley_reisner::stanley_reisner(&e).euler_characteristic());
    }
}

#[test]
fn fermi_examples() {
    assert_eq!(fermi_characteristic(&el("K1")).unwrap(), 1);
    assert_eq!(fermi_characteristic(&el("K3")).unwrap(), -1);
    assert!(matches!(fermi_characteristic(&el("K3 + K1")), Err(Error::NotASingleTerm)));
    assert!(matches!(fermi_characteristic(&el("-K3")), Err(Error::NotASingleTerm)));
    let mut rng = seeded_rng(5);
    for _ in 0..50 {
        let c = random_complex(&mut rng, 25);
        let phi = term_fermi(&ProductTerm::single(c.clone()));
        assert_eq!(det_exact(&complex_connection_laplacian(&c)).unwrap(), BigInt::from(phi));
    }
}

#[test]
fn element_fermi_is_det_of_signed_sum() {
    for s in ["C4 - 2*K3 + L2*L3", "-K2", "K2*K2 - K1", "3*K3"] {
        let e = el(s);
        let l = crate::operators::connection_operator(&e);
        assert_eq!(det_exact(l.matrix()).unwrap(), BigInt::from(element_fermi(&e)), "{s}");
    }
}

#[test]
fn wu_examples() {
    for n in 1..=5 {
        let w = wu_characteristic(&RingElement::from_complex(cx(GeneratorSpec::Complete(n))), 2, WuSemantics::Pairwise)
            .unwrap();
        assert_eq!(w, if n % 2 == 1 { 1 } else { -1 }, "K{n}");
    }
    for n in 4..=8 {
        assert_eq!(wu_complex(&cx(GeneratorSpec::Cycle(n)), 2, WuSemantics::Pairwise), 0);
    }
    assert!(matches!(wu_characteristic(&el("K2"), 1, WuSemantics::Pairwise), Err(Error::BadOrder(1))));
    assert_eq!(wu_characteristic(&el("-K2"), 2, WuSemantics::Pairwise).unwrap(), 1);
}

#[test]
fn wu_product_rule_both_semantics() {
    for (a, b) in random_pairs(17, 25, 10) {
        let t = ProductTerm::new(vec![a.clone(), b.clone()]).unwrap();
        for k in [2, 3] {
            for sem in [WuSemantics::Pairwise, WuSemantics::Common] {
                assert_eq!(wu_term_direct(&t, k, sem), wu_complex(&a, k, sem) * wu_complex(&b, k, sem));
            }
        }
    }
}

#[test]
fn wu_semantics_differ_on_triangles() {
    let k3 = cx(GeneratorSpec::Cycle(3));
    let c = cx(GeneratorSpec::Octahedron);
    assert_eq!(wu_complex(&c, 2, WuSemantics::Pairwise), wu_complex(&c, 2, WuSemantics::Common));
    // three edges of a hollow triangle meet pairwise but share no vertex
    let hollow = SimplicialComplex::from_facets([vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
    assert_ne!(wu_complex(&hollow, 3, WuSemantics::Pairwise), wu_complex(&hollow, 3, WuSemantics::Common));
    // the filled triangle has the same three edges
    assert_ne!(wu_complex(&k3, 3, WuSemantics::Pairwise), wu_complex(&k3, 3, WuSemantics::Common));
    let k2 = cx(GeneratorSpec::Complete(2));
    assert_eq!(wu_complex(&k2, 3, WuSemantics::Pairwise), wu_complex(&k2, 3, WuSemantics::Common));
}

#[test]
fn f_vector_examples() {
    let oct = el("Oct");
    assert_eq!(f_vector(&oct), vec![6, 12, 8]);
    let e = euler_polynomial(&oct);
    assert_eq!(e.coeffs(), &[6, 12, 8]);
    assert_eq!(e.eval(-1), 2);
    let v = f_matrix(&el("K2"));
    assert_eq!(v.iter().flatten().sum::<i64>(), 7);
    assert_eq!(f_vector(&el("-K2")), vec![-2, -1]);
}

#[test]
fn f_polynomials_are_multiplicative() {
    for (a, b) in random_pairs(23, 25, 10) {
        let (ea, eb) = (RingElement::from_complex(a.clone()), RingElement::from_complex(b.clone()));
        let ab = ring_mul(&ea, &eb);
        assert_eq!(euler_polynomial(&ab), &euler_polynomial(&ea) * &euler_polynomial(&eb));
        let t = ProductTerm::new(vec![a.clone(), b.clone()]).unwrap();
        assert_eq!(f_matrix(&ab), f_matrix_term_direct(&t));
        assert_eq!(f_polynomial(&ab), &f_polynomial(&ea) * &f_polynomial(&eb));
        assert_eq!(euler_polynomial(&ab).eval(-1), euler_characteristic(&ab));
    }
}

#[test]
fn betti_examples() {
    let b = betti_numbers(&el("C4"));
    assert_eq!(b.betti, vec![1, 1]);
    assert_eq!(b.poincare.coeffs(), &[1, 1]);
    let s = el("Oct * Susp(Oct)");
    let k = betti_kunneth(&s);
    assert_eq!(k.betti, vec![1, 0, 1, 1, 0, 1]);
    assert_eq!(k.poincare, &IntPoly::new(vec![1, 0, 1]) * &IntPoly::new(vec![1, 0, 0, 1]));
    assert_eq!(betti_numbers(&el("-C4")).betti, vec![-1, -1]);
}

#[test]
fn betti_kunneth_matches_full_ranks() {
    for (a, b) in random_pairs(29, 25, 9) {
        let ab = ring_mul(&RingElement::from_complex(a), &RingElement::from_complex(b));
        let full = betti_numbers(&ab);
        assert_eq!(full, betti_kunneth(&ab));
        assert_eq!(full.poincare.eval(-1), euler_characteristic(&ab));
    }
}

#[test]
fn betti_ranks_match_hodge_kernels() {
    let mut rng = seeded_rng(31);
    for _ in 0..20 {
        let t = ProductTerm::single(random_complex(&mut rng, 30));
        assert_eq!(term_betti(&t), hodge_kernel_betti(&t));
    }
}

#[test]
fn interaction_examples() {
    assert_eq!(interaction_betti(&cx(GeneratorSpec::Complete(1)), 40).unwrap(), vec![1]);
    let mut rng = seeded_rng(37);
    for _ in 0..10 {
        let c = random_complex(&mut rng, 14);
        let b = interaction_betti(&c, 40).unwrap();
        let alt: i64 = b.iter().enumerate().map(|(p, x)| if p % 2 == 0 { *x } else { -x }).sum();
        assert_eq!(alt, wu_complex(&c, 2, WuSemantics::Pairwise));
    }
    let cyl = triangulated_band(4, false).unwrap();
    let mob = triangulated_band(4, true).unwrap();
    assert_eq!(cyl.f_vector(), mob.f_vector());
    assert_ne!(interaction_betti(&cyl, 100).unwrap(), interaction_betti(&mob, 100).unwrap());
    assert!(matches!(interaction_betti(&cyl, 10), Err(Error::TooLarge { .. })));
}

#[test]
fn curvature_examples() {
    let k = curvature(&el("Oct"));
    assert_eq!(k.values.len(), 6);
    assert!(k.values.iter().all(|(_, v)| *v == r(1, 3)));
    assert_eq!(k.total, r(2, 1));
    assert!(curvature(&el("C7")).values.iter().all(|(_, v)| *v == r(0, 1)));
    let e = el("C4 - 2*K3 + L2*L3");
    assert_eq!(curvature(&e).total, r(euler_characteristic(&e), 1));
}

#[test]
fn curvature_product_rule() {
    for (a, b) in random_pairs(41, 25, 10) {
        let t = ProductTerm::new(vec![a.clone(), b.clone()]).unwrap();
        let kt = curvature_term(&t);
        let ka = curvature_term(&ProductTerm::single(t.factors()[0].clone()));
        let kb = curvature_term(&ProductTerm::single(t.factors()[1].clone()));
        let basis = t.basis();
        for (i, k) in kt.iter().enumerate() {
            let cell = &basis.cells()[i];
            assert_eq!(*k, ka[cell[0]] * kb[cell[1]]);
        }
    }
}

#[test]
fn poincare_hopf_dimension_functions() {
    let mut rng = seeded_rng(43);
    for _ in 0..10 {
        let c = random_complex(&mut rng, 16);
        let down = refined_dimension_indices(&c, -1).unwrap();
        let up = refined_dimension_indices(&c, 1).unwrap();
        let green = inverse_green_diagonal(&c);
        for (x, cell) in c.cells().iter().enumerate() {
            assert_eq!(up[x], cell.omega());
            assert_eq!(down[x], green[x] * cell.omega());
        }
        assert_eq!(down.iter().sum::<i64>(), c.euler_characteristic());
        assert_eq!(up.iter().sum::<i64>(), c.euler_characteristic());
    }
}

fn inverse_green_diagonal(c: &SimplicialComplex) -> Vec<i64> {
    use num_traits::ToPrimitive;
    let g = green_functions(&RingElement::from_complex(c.clone())).unwrap();
    g.potentials.iter().zip(&g.omegas).map(|(v, w)| (v * w).to_i64().unwrap()).collect()
}

#[test]
fn poincare_hopf_height_on_cycle() {
    let c4 = cx(GeneratorSpec::Cycle(4));
    let h = |v: usize| Rational64::from_integer(v as i64);
    let sub = poincare_hopf_sublevel(&c4, h);
    let nonzero: Vec<i64> = sub.iter().map(|x| x.1).filter(|&i| i != 0).collect();
    assert_eq!(nonzero, vec![1, -1]);
    let t = ProductTerm::single(c4);
    let direct = poincare_hopf_term(&t, |i| h(t.factors()[0].cells()[i].vertices()[0])).unwrap();
    assert_eq!(direct, sub.iter().map(|x| x.1).collect::<Vec<_>>());
}

#[test]
fn poincare_hopf_random_functions() {
    use rand::seq::SliceRandom;
    let mut rng = seeded_rng(47);
    for _ in 0..5 {
        let c = random_complex(&mut rng, 14);
        let e = RingElement::from_complex(c.clone());
        for _ in 0..10 {
            let mut vals: Vec<i64> = (0..c.vertex_count() as i64).collect();
            vals.shuffle(&mut rng);
            let f = |_: usize, v: usize| Rational64::from_integer(vals[v]);
            assert_eq!(poincare_hopf(&e, f).unwrap().total, c.euler_characteristic());
            let verts = c.vertices();
            let sub = poincare_hopf_sublevel(&c, |v| {
                Rational64::from_integer(vals[verts.iter().position(|&w| w == v).unwrap()])
            });
            assert_eq!(poincare_hopf(&e, f).unwrap().indices.iter().map(|x| x.1).collect::<Vec<_>>(),
                sub.iter().map(|x| x.1).collect::<Vec<_>>());
        }
    }
}

#[test]
fn poincare_hopf_product_indices() {
    for (a, b) in random_pairs(53, 10, 9) {
        let t = ProductTerm::new(vec![a, b]).unwrap();
        let (fa, fb) = (&t.factors()[0], &t.factors()[1]);
        let na = ProductTerm::single(fa.clone()).basis().block(0).len() as i64;
        let ia = poincare_hopf_term(&ProductTerm::single(fa.clone()), |v| r(v as i64, 1)).unwrap();
        let ib = poincare_hopf_term(&ProductTerm::single(fb.clone()), |v| r(v as i64, 1)).unwrap();
        let basis = t.basis();
        // lexicographic on (b, a) is a locally injective product function
        let it = poincare_hopf_term(&t, |i| {
            let c = &basis.cells()[i];
            r(c[1] as i64 * na + c[0] as i64, 1)
        })
        .unwrap();
        for (i, x) in it.iter().enumerate() {
            let c = &basis.cells()[i];
            assert_eq!(*x, ia[c[0]] * ib[c[1]]);
        }
    }
}

#[test]
fn poincare_hopf_rejects_ties() {
    let e = el("K2");
    assert!(matches!(poincare_hopf(&e, |_, _| r(0, 1)), Err(Error::NotLocallyInjective(_))));
}

#[test]
fn index_expectation_examples() {
    let c4 = index_expectation(&el("C4"), Sampler::Exact).unwrap();
    assert!(c4.values.iter().all(|(_, v)| *v == r(0, 1)));
    let k1 = index_expectation(&el("K1"), Sampler::Exact).unwrap();
    assert_eq!(k1.values[0].1, r(1, 1));
    let mc = index_expectation(&el("Oct"), Sampler::MonteCarlo { seed: 7, samples: 100_000 }).unwrap();
    for (_, v) in &mc.values {
        assert!(num_traits::Signed::abs(&(*v - r(1, 3))) < r(1, 100), "{v}");
    }
    assert!(matches!(index_expectation(&el("C9"), Sampler::Exact), Err(Error::TooLargeForExact { found: 9, .. })));
}

#[test]
fn index_expectation_equals_curvature() {
    let mut rng = seeded_rng(59);
    let mut tested = 0;
    while tested < 15 {
        let c = random_complex(&mut rng, 20);
        if c.vertex_count() > 7 {
            continue;
        }
        let e = RingElement::from_complex(c);
        assert_eq!(index_expectation_exact(&e).unwrap(), curvature(&e));
        tested += 1;
    }
    let e = el("K2*C3 - L3");
    assert_eq!(index_expectation_exact(&e).unwrap(), curvature(&e));
}

#[test]
fn monte_carlo_is_reproducible() {
    let e = el("C5 + K3");
    let a = index_expectation_monte_carlo(&e, 99, 10_000);
    let b = index_expectation_monte_carlo(&e, 99, 10_000);
    assert_eq!(a, b);
    assert_eq!(a.total, r(euler_characteristic(&e), 1));
}

#[test]
fn green_examples() {
    let g = green_functions(&el("K1")).unwrap();
    assert_eq!(g.g.to_dense_i64(), vec![vec![1]]);
    assert_eq!(g.total, BigInt::from(1));
    assert_eq!(green_functions(&el("C4 - 2*K3 + L2*L3")).unwrap().total, BigInt::from(-1));
    let mut rng = seeded_rng(61);
    for _ in 0..50 {
        let c = random_complex(&mut rng, 40);
        let chi = c.euler_characteristic();
        assert_eq!(green_functions(&RingElement::from_complex(c)).unwrap().total, BigInt::from(chi));
    }
    assert!(matches!(green_functions_capped(&el("K4"), 10), Err(Error::TooLarge { .. })));
}

#[test]
fn green_probe_counts() {
    let p = green_diagonal_probe(&cx(GeneratorSpec::Complete(1))).unwrap();
    assert_eq!(p, GreenProbe { cells: 1, connection_sphere_matches: 1, refined_sphere_matches: 1 });
    let p = green_diagonal_probe(&cx(GeneratorSpec::Octahedron)).unwrap();
    assert_eq!(p.cells, 26);
    assert!(p.connection_sphere_matches <= p.cells && p.refined_sphere_matches <= p.cells);
}

#[test]
fn lefschetz_identity() {
    for s in ["C4", "K3", "Oct", "L2*L3"] {
        let t = el(s).as_single_term().unwrap().clone();
        let l = lefschetz(&t, &Automorphism::identity(&t)).unwrap();
        assert_eq!(l.chi_t, euler_characteristic(&el(s)));
        assert!(l.agrees());
    }
}

#[test]
fn lefschetz_factor_swap() {
    let t = el("K2*K2").as_single_term().unwrap().clone();
    let l = lefschetz(&t, &Automorphism::factor_swap(&t, 0, 1).unwrap()).unwrap();
    assert_eq!(l.chi_t, 1);
    assert!(l.agrees());
    let basis = t.basis();
    let top: Vec<_> = l.fixed.iter().filter(|(x, _)| basis.dim_of(*x) == 2).collect();
    assert_eq!(top.len(), 1);
    assert_eq!(top[0].1, -1);
    let s = el("C4*C4").as_single_term().unwrap().clone();
    assert!(lefschetz(&s, &Automorphism::factor_swap(&s, 0, 1).unwrap()).unwrap().agrees());
}

#[test]
fn lefschetz_rotations() {
    let t = el("C4").as_single_term().unwrap().clone();
    let l = lefschetz(&t, &Automorphism::on_factor(&t, 0, cycle_rotation(4, 1)).unwrap()).unwrap();
    assert_eq!(l.chi_t, 0);
    assert!(l.fixed.is_empty());
    let t = el("C5*K2").as_single_term().unwrap().clone();
    let ci = t.factors().iter().position(|f| f.vertex_count() == 5).unwrap();
    for k in 0..5 {
        let l = lefschetz(&t, &Automorphism::on_factor(&t, ci, cycle_rotation(5, k)).unwrap()).unwrap();
        assert!(l.agrees(), "rotation by {k}");
    }
}

#[test]
fn mckean_singer_examples() {
    let k = mckean_singer(&el("K4"), 600).unwrap();
    assert_eq!(k.chi, 1);
    assert!(k.passed(1e-8), "{k:?}");
    let s = mckean_singer(&el("Oct * Susp(Oct)"), 600).unwrap();
    assert_eq!(s.chi, 0);
    assert!(s.passed(1e-8), "{s:?}");
    for s in ["C4 - 2*K3 + L2*L3", "K2*C4 - Oct"] {
        let m = mckean_singer(&el(s), 600).unwrap();
        assert!(m.passed(1e-8), "{s}: {m:?}");
        let exact = green_supertrace(&crate::operators::connection_operator(&el(s))).unwrap();
        assert_eq!(exact.to_string(), m.green_supertrace);
    }
}

#[test]
fn dimension_examples() {
    for n in 1..=4 {
        let t = el(&format!("K{n}")).as_single_term().unwrap().clone();
        assert_eq!(dimension(&t).unwrap(), r(n as i64 - 1, 1));
    }
    let l2 = el("L2").as_single_term().unwrap().clone();
    let l3 = el("L3").as_single_term().unwrap().clone();
    let prod = el("L2*L3").as_single_term().unwrap().clone();
    assert_eq!(dimension(&prod).unwrap(), dimension(&l2).unwrap() + dimension(&l3).unwrap());
}

#[test]
fn clique_number_homomorphism() {
    assert_eq!(clique_number(&el("K3*K2")), 6);
    assert_eq!(clique_number(&el("-K3")), -3);
    assert_eq!(clique_number(&el("K3 + K2*K2")), 4);
    let mut rng = seeded_rng(67);
    for _ in 0..25 {
        let a = crate::generators::erdos_renyi(6, 0.5, &mut rng);
        let b = crate::generators::erdos_renyi(5, 0.5, &mut rng);
        let s = crate::graph::strong_product(&a, &b);
        assert_eq!(s.clique_number(), a.clique_number() * b.clique_number());
    }
}

#[test]
fn report_fields() {
    let rep = invariant_report(&el("C4 - 2*K3 + L2*L3"), &ReportOptions { betti: true, ..Default::default() }).unwrap();
    assert_eq!(rep.chi, -1);
    assert_eq!(rep.wu["2"], wu_characteristic(&el("C4 - 2*K3 + L2*L3"), 2, WuSemantics::Pairwise).unwrap());
    assert_eq!(rep.poincare_polynomial.as_ref().unwrap().eval(-1), -1);
    assert_eq!(rep.euler_polynomial.eval(-1), -1);
    let json = serde_json::to_value(&rep).unwrap();
    for key in [
        "chi", "fermi", "wu", "f_vector", "euler_polynomial", "f_matrix", "betti", "poincare_polynomial",
        "interaction_betti", "dim_inductive", "clique_number",
    ] {
        assert!(json.get(key).is_some(), "{key}");
    }
    assert!(json.get("curvature").is_none());
    let rep = invariant_report(&el("K3"), &ReportOptions { curvature: true, interaction_cap: Some(40), ..Default::default() })
        .unwrap();
    let ib = rep.interaction_betti.clone().unwrap();
    assert_eq!(ib.iter().enumerate().map(|(p, x)| if p % 2 == 0 { *x } else { -x }).sum::<i64>(), 1);
    assert_eq!(rep.curvature.unwrap().total, r(1, 1));
}
