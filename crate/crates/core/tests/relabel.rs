use bandforge::fixtures;
use bandforge::gluing::{build_equations, max_residual, volume, ParamType, ShapeVector};
use bandforge::tri::{
    combinatorial_isomorphic, parse_triangulation, serialize_triangulation, validate, Perm,
    Triangulation,
};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn param(z: Complex64, kind: ParamType) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    match kind {
        ParamType::Z => z,
        ParamType::ZPrime => one / (one - z),
        ParamType::ZDoublePrime => one - one / z,
    }
}

/// Renumbers tetrahedra by `order` and relabels the vertices of tetrahedron
/// `t` by the even permutation `sigma[t]` (new vertex `sigma(v)` is old `v`).
fn relabel(t: &Triangulation, order: &[usize], sigma: &[Perm]) -> Triangulation {
    let mut out = t.clone();
    for (old, tet) in t.tets.iter().enumerate() {
        let s = sigma[old];
        let new = &mut out.tets[order[old]];
        for f in 0..4 {
            let nb = tet.neighbors[f];
            let g = tet.gluings[f];
            new.neighbors[s.apply(f)] = order[nb];
            new.gluings[s.apply(f)] = sigma[nb].compose(&g).compose(&s.inverse());
            new.vertex_cusp[s.apply(f)] = tet.vertex_cusp[f];
        }
        for row in 0..4 {
            for v in 0..4 {
                for f in 0..4 {
                    new.peripheral[row][s.apply(v)][s.apply(f)] = tet.peripheral[row][v][f];
                }
            }
        }
        let inv = s.inverse();
        new.shape = param(tet.shape, ParamType::of_edge(inv.apply(0), inv.apply(1)));
    }
    out
}

fn random_relabel(t: &Triangulation, seed: u64) -> Triangulation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..t.tet_count()).collect();
    order.shuffle(&mut rng);
    let even: Vec<Perm> = Perm::all().filter(|p| !p.is_odd()).collect();
    let sigma: Vec<Perm> = (0..t.tet_count())
        .map(|_| even[rng.gen_range(0..even.len())])
        .collect();
    relabel(t, &order, &sigma)
}

#[test]
fn relabeled_copies_are_isomorphic_and_geometric() {
    for (text, vol) in [
        (fixtures::APPENDIX_A, fixtures::APPENDIX_A_VOLUME),
        (fixtures::APPENDIX_B, fixtures::APPENDIX_B_VOLUME),
    ] {
        let t = parse_triangulation(text).unwrap();
        for seed in 0..4 {
            let r = random_relabel(&t, seed);
            assert!(validate(&r).is_empty(), "{:?}", validate(&r));
            assert!(combinatorial_isomorphic(&t, &r));
            assert!(combinatorial_isomorphic(&r, &t));
            let sys = build_equations(&r).unwrap();
            let shapes = ShapeVector(r.shapes());
            assert!(max_residual(&sys, &shapes) < 1e-8);
            assert!((volume(&shapes) - vol).abs() < 5e-7);
            // Shapes are written with twelve decimals; everything else is exact.
            let mut back = parse_triangulation(&serialize_triangulation(&r)).unwrap();
            for (b, o) in back.tets.iter_mut().zip(&r.tets) {
                assert!((b.shape - o.shape).norm() < 1e-12);
                b.shape = o.shape;
            }
            assert_eq!(back, r);
        }
    }
}

#[test]
fn rewired_copy_is_not_isomorphic() {
    let t = fixtures::appendix_a().unwrap();
    let mut r = t.clone();
    // Swap which partner faces of tetrahedron 0 are glued, keeping the
    // pairing an involution by updating both neighbors.
    let (f0, f1) = (0, 1);
    let (n0, n1) = (t.tets[0].neighbors[f0], t.tets[0].neighbors[f1]);
    assert!(n0 != n1 && n0 != 0 && n1 != 0);
    let (g0, g1) = (t.tets[0].gluings[f0], t.tets[0].gluings[f1]);
    let swap = Perm::parse("1023").unwrap();
    r.tets[0].neighbors[f0] = n1;
    r.tets[0].gluings[f0] = g1.compose(&swap);
    r.tets[0].neighbors[f1] = n0;
    r.tets[0].gluings[f1] = g0.compose(&swap);
    let back0 = g1.apply(f1);
    r.tets[n1].neighbors[back0] = 0;
    r.tets[n1].gluings[back0] = g1.compose(&swap).inverse();
    let back1 = g0.apply(f0);
    r.tets[n0].neighbors[back1] = 0;
    r.tets[n0].gluings[back1] = g0.compose(&swap).inverse();
    assert!(!combinatorial_isomorphic(&t, &r));
}
