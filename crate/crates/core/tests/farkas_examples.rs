use farkas_core::catalog::*;
use farkas_core::convexfn::{support_eval, ExtendedValue, PolyhedralFunction};
use farkas_core::farkas::*;
use farkas_core::ratgeom::{HRep, Polyhedron, VRep};
use farkas_core::rational::{int, ivec, ratio, zeros};
use farkas_core::Error;

fn set(dim: usize, ineqs: &[(&[i64], i64)], eqs: &[(&[i64], i64)]) -> Polyhedron {
    let mut h = HRep::new(dim);
    for (r, b) in ineqs {
        h.push_ineq(ivec(r), int(*b));
    }
    for (r, b) in eqs {
        h.push_eq(ivec(r), int(*b));
    }
    Polyhedron::from_h(h).unwrap()
}

fn example1_k() -> Polyhedron {
    set(3, &[(&[1, 1, 0], 0), (&[0, 1, -1], 0)], &[])
}

fn trivial_system(n: usize) -> ConvexSystem {
    ConvexSystem::with_functions(n, None, vec![]).unwrap()
}

fn vertical_half_line(n: usize) -> Polyhedron {
    let mut v = zeros(n + 1);
    v[n] = int(1);
    Polyhedron::cone(n + 1, vec![v], vec![]).unwrap()
}

#[test]
fn characteristic_cone_examples() {
    let s = example1_system();
    let k = s.characteristic_cone().unwrap();
    assert!(k.closure().unwrap().equals(&example1_k()).unwrap());

    let t = trivial_system(2);
    let k = t.characteristic_cone().unwrap();
    assert!(k.closure().unwrap().equals(&vertical_half_line(2)).unwrap());

    let f1 = PolyhedralFunction::affine(ivec(&[1]), int(0)).unwrap();
    let s = ConvexSystem::with_functions(1, None, vec![f1]).unwrap();
    let k = s.characteristic_cone().unwrap();
    let quadrant = Polyhedron::cone(2, vec![ivec(&[1, 0]), ivec(&[0, 1])], vec![]).unwrap();
    assert!(k.closure().unwrap().equals(&quadrant).unwrap());
}

#[test]
fn example1_support_values() {
    let s = example1_system();
    let k = s.characteristic_cone().unwrap().closure().unwrap().clone();
    assert_eq!(support_eval(&k, &ivec(&[1, 1, 0])).unwrap(), ExtendedValue::Finite(int(0)));
    let f = example1_objective();
    let epi = f.conjugate().unwrap().epigraph().clone();
    assert_eq!(support_eval(&epi, &ivec(&[1, 1, 0])).unwrap(), ExtendedValue::Finite(int(-1)));
}

#[test]
fn member_closure_examples() {
    let s = example1_system();
    let f = example1_objective();
    for alpha in [-1, 0, 1] {
        assert!(!member_closure(&ivec(&[0, 0, -alpha]), &f, &s).unwrap(), "alpha = {alpha}");
    }
    let t = trivial_system(1);
    let zero = PolyhedralFunction::zero(1);
    assert!(member_closure(&ivec(&[0, 1]), &zero, &t).unwrap());
    assert!(!member_closure(&ivec(&[0, -1]), &zero, &t).unwrap());
}

#[test]
fn member_exact_examples() {
    let nc = sigma_nc();
    let zero = PolyhedralFunction::zero(2);
    let q = ivec(&[0, 1, 0]);
    assert!(member_closure(&q, &zero, &nc).unwrap());
    assert!(member_exact(&q, &zero, &nc).unwrap().is_none());

    // (1,1,10) lies outside the closure: the closure needs u + v <= -1 there.
    let s = example1_system();
    let f = example1_objective();
    assert!(!member_closure(&ivec(&[1, 1, 10]), &f, &s).unwrap());
    let q = ivec(&[-1, -1, 10]);
    assert!(member_closure(&q, &f, &s).unwrap());
    let d = member_exact(&q, &f, &s).unwrap().expect("exact decomposition");
    assert!(d.is_exact());
    let epi = f.conjugate().unwrap().epigraph().clone();
    assert!(d.verify(&q, Some(&epi), &s).unwrap());

    for sys in [example1_system(), sigma_nc()] {
        let d = member_exact(&zeros(3), &zero, &sys).unwrap().expect("origin");
        assert!(d.is_exact());
    }
}

#[test]
fn check_consequence_examples() {
    let s = example1_system();
    let f = example1_objective();
    for alpha in [-3, 0, 7] {
        let v = check_consequence(&f, &zeros(2), &int(alpha), &s).unwrap();
        match v.verdict {
            Verdict::VacuousHiddenAssumptionFails(d) => {
                assert!(d.system_consistent);
                assert_eq!(d.recession_witness, Some(ivec(&[1, 1])));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    let sys = half_line();
    let f = negation();
    let v = check_consequence(&f, &ivec(&[0]), &int(-1), &sys).unwrap();
    let Verdict::CertifiedConsequence(cert) = v.verdict else {
        panic!("expected a certificate, got {:?}", v.verdict);
    };
    assert!(cert.verify(&f, &sys).unwrap());
    assert_eq!(cert.j(), vec![0]);
    assert_eq!(cert.multipliers[0].lambda, int(1));
    assert_eq!(cert.u_star, ivec(&[-1]));
    assert_eq!(cert.f_conj, int(0));
    assert_eq!(cert.multipliers[0].u, ivec(&[1]));
    assert_eq!(cert.multipliers[0].conj_value, int(1));

    let v = check_consequence(&f, &ivec(&[0]), &ratio(-1, 2), &sys).unwrap();
    assert_eq!(v.verdict, Verdict::NotConsequence { witness: ivec(&[1]) });
}

#[test]
fn tampered_certificate_fails() {
    let sys = half_line();
    let f = negation();
    let v = check_consequence(&f, &ivec(&[0]), &int(-1), &sys).unwrap();
    let Verdict::CertifiedConsequence(mut cert) = v.verdict else {
        panic!()
    };
    cert.multipliers[0].lambda = int(2);
    assert!(!cert.verify(&f, &sys).unwrap());
}

#[test]
fn asymptotic_consequence_on_open_cone() {
    // 0 - <(0,1), x> >= 0 holds on {x_2 = 0} but has no finite certificate
    let nc = sigma_nc();
    let zero = PolyhedralFunction::zero(2);
    let v = check_consequence(&zero, &ivec(&[0, 1]), &int(0), &nc).unwrap();
    assert_eq!(v.verdict, Verdict::AsymptoticConsequence);
}

#[test]
fn find_violation_examples() {
    let sys = half_line();
    let f = negation();
    assert_eq!(find_violation(&f, &ivec(&[0]), &ratio(-1, 2), &sys).unwrap(), Some(ivec(&[1])));
    assert_eq!(find_violation(&f, &ivec(&[0]), &int(-1), &sys).unwrap(), None);
    let t = trivial_system(1);
    let w = find_violation(&PolyhedralFunction::zero(1), &ivec(&[1]), &int(0), &t)
        .unwrap()
        .unwrap();
    assert!(w[0] > int(0));
    assert_eq!(
        find_violation(&example1_objective(), &zeros(2), &int(0), &example1_system()),
        Err(Error::HiddenAssumptionFails)
    );
}

#[test]
fn hidden_assumption_examples() {
    assert_eq!(
        hidden_assumption(&example1_objective(), &example1_system()).unwrap(),
        HiddenAssumption::Fails
    );
    assert!(matches!(
        hidden_assumption(&PolyhedralFunction::zero(2), &example1_system()).unwrap(),
        HiddenAssumption::Holds(_)
    ));
    assert_eq!(
        hidden_assumption(&PolyhedralFunction::zero(1), &infeasible_pair()).unwrap(),
        HiddenAssumption::Fails
    );
}

#[test]
fn cylinder_identity_examples() {
    assert!(verify_cylinder_identity(&example1_objective(), &example1_system()).unwrap());
    assert!(!verify_cylinder_identity(&PolyhedralFunction::zero(2), &example1_system()).unwrap());
    assert!(!verify_cylinder_identity(&PolyhedralFunction::zero(2), &sigma_nc()).unwrap());
}

#[test]
fn recession_witness_examples() {
    let s = example1_system();
    let f = example1_objective();
    assert_eq!(recession_witness(&f, &s, &zeros(2)).unwrap(), Some(ivec(&[1, 1])));
    assert_eq!(recession_witness(&f, &s, &ivec(&[0, -2])).unwrap(), None);
    // bounded A: no nonzero direction
    let f1 = PolyhedralFunction::indicator(&set(1, &[(&[1], 1), (&[-1], 1)], &[])).unwrap();
    let bounded = ConvexSystem::with_functions(1, None, vec![f1]).unwrap();
    let g = PolyhedralFunction::indicator(&set(1, &[(&[1], 5), (&[-1], -3)], &[])).unwrap();
    assert_eq!(recession_witness(&g, &bounded, &ivec(&[4])).unwrap(), None);
    assert!(matches!(
        recession_witness(&PolyhedralFunction::zero(2), &s, &zeros(2)),
        Err(Error::PremiseViolated(_))
    ));
}

#[test]
fn farkas_minkowski_examples() {
    assert_eq!(is_farkas_minkowski(&example1_system()).unwrap(), FmStatus::Fm);
    match is_farkas_minkowski(&sigma_nc()).unwrap() {
        FmStatus::NotFm(NotFmReason::OpenCone { offending_ray }) => {
            assert!(offending_ray == ivec(&[0, 1, 0]) || offending_ray == ivec(&[0, -1, 0]));
        }
        other => panic!("unexpected {other:?}"),
    }
    assert_eq!(is_farkas_minkowski(&trivial_system(3)).unwrap(), FmStatus::Fm);
    assert_eq!(
        is_farkas_minkowski(&infeasible_pair()).unwrap(),
        FmStatus::NotFm(NotFmReason::EmptySolutionSet)
    );
}

#[test]
fn consistency_examples() {
    let pair = infeasible_pair();
    match is_consistent(&pair).unwrap() {
        Consistency::Inconsistent(d) => assert!(d.verify(&ivec(&[0, -1]), None, &pair).unwrap()),
        other => panic!("unexpected {other:?}"),
    }
    assert!(inconsistency_cone_identity(&pair).unwrap());

    let s = example1_system();
    match is_consistent(&s).unwrap() {
        Consistency::Consistent(x) => assert!(s.is_feasible(&x).unwrap()),
        other => panic!("unexpected {other:?}"),
    }
    assert!(!inconsistency_cone_identity(&s).unwrap());
    assert!(matches!(is_consistent(&trivial_system(2)).unwrap(), Consistency::Consistent(_)));
}

#[test]
fn epi_delta_a_examples() {
    let s = example1_system();
    let k = epi_delta_a(&s).unwrap();
    assert!(k.equals(&example1_k()).unwrap());
    assert!(k.equals(&delta_a_conjugate_epigraph(&s).unwrap()).unwrap());

    let t = trivial_system(2);
    assert!(epi_delta_a(&t).unwrap().equals(&vertical_half_line(2)).unwrap());

    let nc = sigma_nc();
    let b = set(2, &[(&[1, 0], 0)], &[(&[0, 1], 0)]);
    let direct = PolyhedralFunction::indicator(&b).unwrap().conjugate().unwrap().epigraph().clone();
    assert!(epi_delta_a(&nc).unwrap().equals(&direct).unwrap());
    assert!(delta_a_conjugate_epigraph(&nc).unwrap().equals(&direct).unwrap());
    assert_eq!(epi_delta_a(&infeasible_pair()).unwrap_err(), Error::InconsistentSystem);
}

#[test]
fn example1_solution_set() {
    let s = example1_system();
    let a = s.a().unwrap();
    let expect = Polyhedron::from_v(
        2,
        VRep {
            points: vec![ivec(&[0, 1])],
            rays: vec![ivec(&[1, 1])],
            lineality: vec![],
        },
    )
    .unwrap();
    assert!(a.equals(&expect).unwrap());
}

#[test]
fn closure_cone_contains_vertical_ray() {
    for s in [example1_system(), sigma_nc(), infeasible_pair(), half_line()] {
        let n = s.n();
        let mut up = zeros(n + 1);
        up[n] = int(1);
        assert!(s.characteristic_cone().unwrap().closure().unwrap().contains(&up).unwrap());
    }
}

#[test]
fn sum_closedness_routes() {
    let (sys, f) = kkt_example();
    assert_eq!(sum_closedness(&f, &sys).unwrap(), Closedness::FarkasMinkowskiRealValued);
    let nc = sigma_nc();
    assert_eq!(
        sum_closedness(&PolyhedralFunction::zero(2), &nc).unwrap(),
        Closedness::Unverified
    );
}
