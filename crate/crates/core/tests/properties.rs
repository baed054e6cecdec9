use farkas_core::exactlp::{solve, LinearProgram, Sense};
use farkas_core::oracle::gen;
use farkas_core::oracle::stream_rng;
use farkas_core::ratgeom::{HRep, Polyhedron, Repr};
use farkas_core::rational::{int, scale};
use proptest::prelude::*;
use rand::Rng;

fn polyhedron(seed: u64, n: usize) -> Polyhedron {
    let mut rng = stream_rng(seed, 0);
    let through = gen::int_vec(&mut rng, n, -2, 2);
    let rows = rng.gen_range(1..=n + 2);
    gen::polyhedron_through(&mut rng, &through, rows)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn h_v_round_trip(seed in any::<u64>(), n in 1usize..=3) {
        let p = polyhedron(seed, n);
        let back = Polyhedron::from_v(n, p.v().unwrap().clone()).unwrap().convert(Repr::H).unwrap();
        prop_assert!(back.equals(&p).unwrap());
        prop_assert!(Polyhedron::from_h(back.h().unwrap().clone()).unwrap().equals(&p).unwrap());
    }

    #[test]
    fn polar_is_an_involution_on_closed_cones(seed in any::<u64>(), n in 1usize..=3) {
        let k = polyhedron(seed, n).closed_conic_hull().unwrap();
        prop_assert!(k.polar().unwrap().polar().unwrap().equals(&k).unwrap());
    }

    #[test]
    fn recession_of_intersection(a in any::<u64>(), b in any::<u64>(), n in 1usize..=3) {
        let p = polyhedron(a, n);
        let q = polyhedron(b, n);
        let both = p.intersect(&q).unwrap();
        prop_assume!(!both.is_empty().unwrap());
        let lhs = both.recession_cone().unwrap();
        let rhs = p.recession_cone().unwrap().intersect(&q.recession_cone().unwrap()).unwrap();
        prop_assert!(lhs.equals(&rhs).unwrap());
    }

    #[test]
    fn minkowski_sum_laws(a in any::<u64>(), b in any::<u64>(), c in any::<u64>(), n in 1usize..=2) {
        let (p, q, r) = (polyhedron(a, n), polyhedron(b, n), polyhedron(c, n));
        let pq = p.minkowski_sum(&q).unwrap();
        prop_assert!(pq.equals(&q.minkowski_sum(&p).unwrap()).unwrap());
        let left = pq.minkowski_sum(&r).unwrap();
        let right = p.minkowski_sum(&q.minkowski_sum(&r).unwrap()).unwrap();
        prop_assert!(left.equals(&right).unwrap());
    }

    #[test]
    fn conic_hull_contains_scaled_points(seed in any::<u64>(), n in 1usize..=3, num in 0i64..20, den in 1i64..5) {
        let p = polyhedron(seed, n);
        let k = p.closed_conic_hull().unwrap();
        let lam = int(num) / int(den);
        for x in &p.v().unwrap().points {
            prop_assert!(k.contains(&scale(&lam, x)).unwrap());
        }
    }

    #[test]
    fn lp_outcomes_verify(seed in any::<u64>(), n in 1usize..=4, max in any::<bool>()) {
        let mut rng = stream_rng(seed, 1);
        let mut h = HRep::new(n);
        for _ in 0..rng.gen_range(1..=n + 3) {
            let row = gen::int_vec(&mut rng, n, -3, 3);
            h.push_ineq(row, int(rng.gen_range(-4..=4)));
        }
        if rng.gen_bool(0.3) {
            h.push_eq(gen::int_vec(&mut rng, n, -2, 2), int(rng.gen_range(-2..=2)));
        }
        let lp = LinearProgram::new(gen::int_vec(&mut rng, n, -3, 3), if max { Sense::Max } else { Sense::Min }, h);
        let out = solve(&lp).unwrap();
        prop_assert!(out.verify(&lp));
        prop_assert_eq!(out, solve(&lp).unwrap());
    }
}
