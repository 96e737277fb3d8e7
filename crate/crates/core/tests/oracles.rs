//! Frozen values checked against independent oracles: a literal index-tuple
//! Moyal sum and a brute-force enumeration of weight-zero monomials.

use qcenter_core::envalg::{EnvelopingAlgebra, HamiltonianAction, LieAlgebraData};
use qcenter_core::invcenter::invariants_up_to;
use qcenter_core::{int, rat, HSeries, Monomial, Poly, Scalar, StarProduct, SymplecticSpace};

/// `D_m(f, g)` as the literal sum over ordered index tuples
/// `(i_1, j_1), …, (i_m, j_m)` with `P^{i j} ≠ 0`.
fn naive_moyal_term(space: &SymplecticSpace, m: usize, f: &Poly, g: &Poly) -> Poly {
    let nvars = space.nvars();
    let p = space.poisson_matrix();
    let pairs: Vec<(usize, usize)> =
        (0..nvars).flat_map(|i| (0..nvars).map(move |j| (i, j))).filter(|&(i, j)| p[i][j] != int(0)).collect();
    let mut total = Poly::zero(nvars);
    let mut idx = vec![0usize; m];
    loop {
        let mut coeff = Scalar::from_integer(1.into());
        let mut df = f.clone();
        let mut dg = g.clone();
        for &k in &idx {
            let (i, j) = pairs[k];
            coeff *= &p[i][j];
            df = df.partial_derivative(i).unwrap();
            dg = dg.partial_derivative(j).unwrap();
        }
        total += &(&df * &dg).scale(&coeff);
        let mut pos = 0;
        while pos < m {
            idx[pos] += 1;
            if idx[pos] < pairs.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
        if pos == m {
            break;
        }
    }
    let mut norm = Scalar::from_integer(1.into());
    for k in 1..=m {
        norm *= Scalar::from_integer((2 * k as i64).into());
    }
    total.scale(&norm.recip())
}

fn naive_moyal(space: &SymplecticSpace, order: usize, f: &Poly, g: &Poly) -> HSeries {
    let coeffs = (0..=order).map(|m| naive_moyal_term(space, m, f, g)).collect();
    HSeries::from_coeffs(space.nvars(), coeffs, order).unwrap()
}

fn series(nvars: usize, order: usize, terms: &[(usize, Poly)]) -> HSeries {
    let mut s = HSeries::zero(nvars, order);
    for (m, p) in terms {
        let prev = s.coeff(*m).clone();
        s.set_coeff(*m, &prev + p);
    }
    s
}

#[test]
fn q_star_p() {
    let space = SymplecticSpace::standard(1);
    let star = StarProduct::new(space.clone(), 4);
    let (q, p) = (space.q(0), space.p(0));
    let expected = series(2, 4, &[(0, &q * &p), (1, Poly::constant(2, rat(1, 2)))]);
    assert_eq!(naive_moyal(&space, 4, &q, &p), expected);
    assert_eq!(star.moyal(&q, &p).unwrap(), expected);
}

#[test]
fn qp_star_qp() {
    let space = SymplecticSpace::standard(1);
    let star = StarProduct::new(space.clone(), 4);
    let qp = &space.q(0) * &space.p(0);
    let expected = series(2, 4, &[(0, qp.pow(2)), (2, Poly::constant(2, rat(-1, 4)))]);
    assert_eq!(naive_moyal(&space, 4, &qp, &qp), expected);
    assert_eq!(star.moyal(&qp, &qp).unwrap(), expected);
}

#[test]
fn euler_squared() {
    let space = SymplecticSpace::standard(2);
    let star = StarProduct::new(space.clone(), 4);
    let e = &(&space.q(0) * &space.p(0)) + &(&space.q(1) * &space.p(1));
    let expected = series(4, 4, &[(0, e.pow(2)), (2, Poly::constant(4, rat(-1, 2)))]);
    assert_eq!(naive_moyal(&space, 4, &e, &e), expected);
    assert_eq!(star.moyal(&e, &e).unwrap(), expected);
}

#[test]
fn sl2_hamiltonian_product() {
    let space = SymplecticSpace::standard(2);
    let star = StarProduct::new(space.clone(), 4);
    let (q1, q2, p1, p2) = (space.q(0), space.q(1), space.p(0), space.p(1));
    let he = &q2 * &p1;
    let hf = &q1 * &p2;
    let hh = &(&q1 * &p1) - &(&q2 * &p2);
    let expected = series(4, 4, &[(0, &he * &hf), (1, hh.scale(&rat(1, 2))), (2, Poly::constant(4, rat(-1, 4)))]);
    assert_eq!(naive_moyal(&space, 4, &he, &hf), expected);
    assert_eq!(star.moyal(&he, &hf).unwrap(), expected);
}

#[test]
fn moyal_matches_naive_sum_on_mixed_polynomials() {
    let space = SymplecticSpace::standard(2);
    let star = StarProduct::new(space.clone(), 6);
    let (q1, q2, p1, p2) = (space.q(0), space.q(1), space.p(0), space.p(1));
    let f = &(&q1.pow(2) * &p2) + &(&q2 * &p1).pow(2).scale(&rat(3, 7));
    let g = &(&p1.pow(3) * &q2) - &(&q1 * &p2).scale(&int(5));
    assert_eq!(star.moyal(&f, &g).unwrap(), naive_moyal(&space, 6, &f, &g));
    assert_eq!(star.moyal(&g, &f).unwrap(), naive_moyal(&space, 6, &g, &f));
}

#[test]
fn moyal_matches_naive_sum_for_nonstandard_bivector() {
    // P = [[0, 2, 1, 0], [-2, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]] is invertible
    let rows = [[0, 2, 1, 0], [-2, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]];
    let poisson = rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
    let space = SymplecticSpace::new(2, poisson, vec![-1; 4], 2).unwrap();
    let star = StarProduct::new(space.clone(), 5);
    let x: Vec<Poly> = (0..4).map(|i| Poly::var(4, i)).collect();
    let f = &(&x[0] * &x[1]) + &x[2].pow(2);
    let g = &(&x[1].pow(2) * &x[3]) + &x[0];
    assert_eq!(star.moyal(&f, &g).unwrap(), naive_moyal(&space, 5, &f, &g));
}

#[test]
fn symmetrized_ef_and_casimir() {
    let alg = EnvelopingAlgebra::new(LieAlgebraData::sl2(), 4);
    let (e, h, f) = (Poly::var(3, 0), Poly::var(3, 1), Poly::var(3, 2));
    let casimir = &h.pow(2) + &(&e * &f).scale(&int(4));
    let sym = alg.symmetrize(&casimir).unwrap();
    // sym(h² + 4ef) = h² + 4ef - 2ħh in PBW order e < h < f
    let mut expected = alg.generator(1).mul_hbar().scale(&int(-2));
    expected = expected.add(&alg.mul(&alg.generator(1), &alg.generator(1)).unwrap()).unwrap();
    expected = expected.add(&alg.mul(&alg.generator(0), &alg.generator(2)).unwrap().scale(&int(4))).unwrap();
    assert_eq!(sym, expected);
}

#[test]
fn comoment_of_symmetrized_casimir() {
    let space = SymplecticSpace::standard(2);
    let (q1, q2, p1, p2) = (space.q(0), space.q(1), space.p(0), space.p(1));
    let hh = &(&q1 * &p1) - &(&q2 * &p2);
    let act = HamiltonianAction::new(
        LieAlgebraData::sl2(),
        StarProduct::new(space.clone(), 6),
        vec![&q2 * &p1, hh, &q1 * &p2],
        None,
    )
    .unwrap();
    let alg = EnvelopingAlgebra::new(LieAlgebraData::sl2(), 6);
    let image = act.comoment(&alg.symmetrize(&act.lie().invariant_generators()[0]).unwrap()).unwrap();
    let e = &(&q1 * &p1) + &(&q2 * &p2);
    assert_eq!(image, series(4, 6, &[(0, e.pow(2)), (2, Poly::constant(4, rat(-3, 2)))]));
}

/// Monomials of degree `d` whose torus weight `Σ a_i (e_{q_i} - e_{p_i})`
/// vanishes, found by enumerating exponent vectors directly.
fn weight_zero_monomials(n: usize, torus: &[Vec<i64>], d: u32) -> Vec<Monomial> {
    let nvars = 2 * n;
    let mut out = Vec::new();
    let mut exps = vec![0u32; nvars];
    fn rec(i: usize, left: u32, exps: &mut Vec<u32>, n: usize, torus: &[Vec<i64>], out: &mut Vec<Monomial>) {
        if i + 1 == exps.len() {
            exps[i] = left;
            let zero =
                torus.iter().all(|a| (0..n).map(|k| a[k] * (exps[k] as i64 - exps[n + k] as i64)).sum::<i64>() == 0);
            if zero {
                out.push(Monomial::new(exps.clone()));
            }
            return;
        }
        for e in 0..=left {
            exps[i] = e;
            rec(i + 1, left - e, exps, n, torus, out);
        }
    }
    rec(0, d, &mut exps, n, torus, &mut out);
    out.sort();
    out
}

fn torus_action(n: usize, torus: &[Vec<i64>]) -> HamiltonianAction {
    let space = SymplecticSpace::standard(n);
    let hs: Vec<Poly> = torus
        .iter()
        .map(|a| (0..n).fold(Poly::zero(2 * n), |acc, k| &acc + &(&space.q(k) * &space.p(k)).scale(&int(a[k]))))
        .collect();
    HamiltonianAction::new(LieAlgebraData::abelian(torus.len()), StarProduct::new(space, 1), hs, None).unwrap()
}

#[test]
fn torus_invariants_match_weight_zero_enumeration() {
    for (n, torus) in
        [(1, vec![vec![1]]), (2, vec![vec![1, 1]]), (2, vec![vec![1, 0], vec![0, 1]]), (2, vec![vec![1, 2]])]
    {
        let act = torus_action(n, &torus);
        let inv = invariants_up_to(&act, 8).unwrap();
        for d in 0..=8 {
            let expected: Vec<Poly> =
                weight_zero_monomials(n, &torus, d).into_iter().map(|m| Poly::term(m, int(1))).collect();
            let mut got = inv.basis(d).to_vec();
            got.sort_by(|a, b| a.leading_term().unwrap().0.cmp(b.leading_term().unwrap().0));
            let mut want = expected;
            want.sort_by(|a, b| a.leading_term().unwrap().0.cmp(b.leading_term().unwrap().0));
            assert_eq!(got, want, "torus {torus:?}, degree {d}");
        }
    }
}

#[test]
fn torus_k2_invariants_frozen() {
    let act = torus_action(1, &[vec![1]]);
    let inv = invariants_up_to(&act, 4).unwrap();
    let qp = Poly::var(2, 0) * Poly::var(2, 1);
    let all: Vec<Poly> = inv.all().cloned().collect();
    assert_eq!(all, vec![Poly::one(2), qp.clone(), qp.pow(2)]);
}

#[test]
fn sl2_quadratic_invariants_frozen() {
    let space = SymplecticSpace::standard(2);
    let (q1, q2, p1, p2) = (space.q(0), space.q(1), space.p(0), space.p(1));
    let hh = &(&q1 * &p1) - &(&q2 * &p2);
    let act =
        HamiltonianAction::new(LieAlgebraData::sl2(), StarProduct::new(space, 1), vec![&q2 * &p1, hh, &q1 * &p2], None)
            .unwrap();
    let inv = invariants_up_to(&act, 2).unwrap();
    assert_eq!(inv.basis(2), &[&(&q1 * &p1) + &(&q2 * &p2)]);
    assert_eq!(inv.dim(1), 0);
}
