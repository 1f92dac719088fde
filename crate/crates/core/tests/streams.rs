//! Coefficient streams against independent evaluation and quadrature, and
//! properties of the embedding ι.

use std::sync::Arc;

use num_traits::{One, Zero};
use tempered::dist::{
    embed, stream_classic, stream_general, xplus_closed_form, ClassicKind, CoefficientStream, GeneralKind,
};
use tempered::gauss::poly;
use tempered::hermite::{hermite_at_zero, hermite_rate, DEFAULT_CAP};
use tempered::scalar::{cabs, cx, Cx};
use tempered::{rate, Basis, BigFloat, Gps, PrecisionContext, Real, Region, Side};

type B = BigFloat;

fn rel_close(a: &Cx<B>, b: &Cx<B>, rel: f64) -> bool {
    let diff = cabs(&(a.clone() - b.clone()));
    let scale = B::max_of(cabs(b), B::one());
    (diff / scale).to_f64() <= rel
}

fn basis() -> Arc<Basis> {
    Basis::new(DEFAULT_CAP)
}

#[test]
fn delta_one_and_dprime_match_oracles() {
    let _g = PrecisionContext::default().enter_for_order(100);
    let basis = basis();
    let delta = stream_classic::<B>(ClassicKind::Delta).unwrap();
    let one = stream_classic::<B>(ClassicKind::One).unwrap();
    let dprime = stream_classic::<B>(ClassicKind::DeltaPrime).unwrap();
    let heaviside = stream_classic::<B>(ClassicKind::Heaviside).unwrap();
    let tol10 = B::of_int(10) * B::tolerance();
    for n in 0..=50 {
        let hn = basis.function(n).unwrap();
        assert!(rel_close(&delta.value(n).unwrap(), &hn.eval(&B::zero()), 1e-20), "delta {n}");
        let full = hn.integral(&Region::Full);
        assert!(rel_close(&one.value(n).unwrap(), &full, 1e-20), "one {n}");
        assert!(cabs(&(one.value(n).unwrap() - full)) <= tol10);
        let half = hn.integral(&Region::half_line(B::zero(), Side::Right));
        assert!(cabs(&(heaviside.value(n).unwrap() - half)) <= tol10, "heaviside {n}");
        let minus_deriv = -hn.derive().eval(&B::zero());
        assert!(rel_close(&dprime.value(n).unwrap(), &minus_deriv, 1e-20), "dprime {n}");
        if n > 0 {
            let ladder = -B::of_int(n as i64).sqrt() * hermite_at_zero::<B>(n - 1);
            assert!(cabs(&(dprime.value(n).unwrap() - cx(ladder))) <= B::tolerance());
        }
    }
}

#[test]
fn dprime_sign_differs_from_printed_formula() {
    // The printed coefficient is +√n h_{n-1}(0); the definition δ'(φ) = -φ'(0)
    // gives the opposite sign wherever the value is nonzero.
    let _g = PrecisionContext::default().enter();
    let dprime = stream_classic::<B>(ClassicKind::DeltaPrime).unwrap();
    for n in (1..=41).step_by(2) {
        let printed = B::of_int(n as i64).sqrt() * hermite_at_zero::<B>(n - 1);
        let ours = dprime.value(n).unwrap().re;
        assert!(printed.abs() > B::of_f64(1e-3));
        assert!(cabs(&cx(ours + printed)) <= B::tolerance(), "n = {n}");
    }
}

#[test]
fn xplus_closed_form_matches_half_line_integrals() {
    let _g = PrecisionContext::default().enter_for_order(100);
    let basis = basis();
    for p in 0..=2usize {
        let stream = stream_classic::<B>(ClassicKind::XPlus(B::of_int(p as i64))).unwrap();
        let mut monomial = vec![Cx::<B>::zero(); p + 1];
        monomial[p] = cx(B::one());
        for n in 0..=50 {
            let oracle = basis
                .function(n)
                .unwrap()
                .mul_poly(&monomial)
                .integral(&Region::half_line(B::zero(), Side::Right));
            let closed = cx(xplus_closed_form(&B::of_int(p as i64), n));
            assert!(rel_close(&closed, &oracle, 1e-20), "p = {p}, n = {n}");
            assert!(rel_close(&stream.value(n).unwrap(), &oracle, 1e-20));
        }
    }
}

#[test]
fn fractional_xplus_against_trapezoid() {
    // x^{1/2} h_n on [0, 40]: substitute x = u² to get a smooth integrand
    // 2u² h_n(u²) and use a fine trapezoid rule.
    let p = 0.5f64;
    let c0 = (2.0 * std::f64::consts::PI).powf(-0.25);
    for n in 0..=6usize {
        let hn = |x: f64| {
            let mut prev = 0.0;
            let mut cur = c0 * (-x * x / 4.0).exp();
            for k in 0..n {
                let next = (x * cur - (k as f64).sqrt() * prev) / ((k + 1) as f64).sqrt();
                prev = cur;
                cur = next;
            }
            cur
        };
        let step = 1e-3;
        let mut acc = 0.0;
        for i in 1..7000 {
            let u = i as f64 * step;
            acc += 2.0 * u * u * hn(u * u);
        }
        let oracle = acc * step;
        let closed = xplus_closed_form(&p, n);
        assert!((closed - oracle).abs() < 1e-8, "n = {n}: {closed} vs {oracle}");
    }
}

#[test]
fn abs_and_sgn_relations() {
    let _g = PrecisionContext::default().enter_for_order(60);
    let basis = basis();
    let tol = B::of_int(10) * B::tolerance();
    let abs0 = stream_general(GeneralKind::Abs(B::zero()), &basis).unwrap();
    let sgn0 = stream_general(GeneralKind::Sgn(B::zero()), &basis).unwrap();
    let x1 = stream_classic::<B>(ClassicKind::XPlus(B::one())).unwrap();
    let heav = stream_classic::<B>(ClassicKind::Heaviside).unwrap();
    for n in 0..=30 {
        let parity = if n % 2 == 0 { B::one() } else { -B::one() };
        let expect_abs = x1.value(n).unwrap() * cx(B::one() + parity.clone());
        assert!(cabs(&(abs0.value(n).unwrap() - expect_abs)) <= tol, "abs {n}");
        let expect_sgn = heav.value(n).unwrap() * cx(B::one() - parity);
        assert!(cabs(&(sgn0.value(n).unwrap() - expect_sgn)) <= tol, "sgn {n}");
    }
    // D|x - a| = sgn(x - a), D sgn(x - a) = 2 δ_a
    let a = B::of_f64(0.6);
    let abs_a = stream_general(GeneralKind::Abs(a.clone()), &basis).unwrap();
    let sgn_a = stream_general(GeneralKind::Sgn(a.clone()), &basis).unwrap();
    let delta_a = stream_general(GeneralKind::DeltaAt(a), &basis).unwrap();
    let d_abs = abs_a.derive();
    let d_sgn = sgn_a.derive();
    for n in 0..=30 {
        assert!(cabs(&(d_abs.value(n).unwrap() - sgn_a.value(n).unwrap())) <= tol, "D abs {n}");
        let two_delta = delta_a.value(n).unwrap() * cx(B::of_int(2));
        assert!(cabs(&(d_sgn.value(n).unwrap() - two_delta)) <= tol, "D sgn {n}");
    }
    let expect = 4.0 * (2.0 * std::f64::consts::PI).powf(-0.25);
    assert!((abs0.value(0).unwrap().re.to_f64() - expect).abs() < 1e-14);
    assert!((expect - 2.5264751).abs() < 1e-7);
}

#[test]
fn embedding_examples() {
    let _g = PrecisionContext::default().enter_for_order(40);
    let basis = basis();
    let delta = embed(&stream_classic::<B>(ClassicKind::Delta).unwrap(), &basis);
    assert!(delta.is_hermite_form());
    let h0 = basis.function(0).unwrap();
    let expect = h0.scale_real(&hermite_at_zero::<B>(0));
    assert!(delta.at(0).unwrap().coeff_distance(&expect) <= B::tolerance());

    let h3 = basis.function(3).unwrap();
    let phi = embed(&stream_general(GeneralKind::FromGps(h3.clone()), &basis).unwrap(), &basis);
    for n in [3, 4, 9, 20] {
        assert!(phi.at(n).unwrap().coeff_distance(&h3) <= B::tolerance());
    }
}

#[test]
fn embedding_is_linear() {
    let _g = PrecisionContext::default().enter_for_order(40);
    let basis = basis();
    let s = stream_classic::<B>(ClassicKind::Delta).unwrap();
    let t = stream_classic::<B>(ClassicKind::One).unwrap();
    let (alpha, beta) = (cx(B::of_f64(1.5)), Cx::new(B::of_f64(-0.25), B::of_f64(2.0)));
    let combined = embed(&s.scale(alpha.clone()).add(&t.scale(beta.clone())), &basis);
    let (es, et) = (embed(&s, &basis), embed(&t, &basis));
    for n in [0, 7, 20, 33] {
        let rhs = es.at(n).unwrap().scale(&alpha).add(&et.at(n).unwrap().scale(&beta));
        assert!(combined.at(n).unwrap().coeff_distance(&rhs) <= B::tolerance());
    }
}

/// `D(ι(δ)_n)` and `ι(δ')_n` agree on every Hermite coefficient below `n`;
/// at `n` and `n+1` the derivative of the truncated sum carries the
/// boundary terms `-½√n h_{n-1}(0) h_n - ½√(n+1) h_n(0) h_{n+1}`, which the
/// truncated stream of δ' does not contain.
#[test]
fn derivative_commutes_with_embedding_below_the_cut() {
    let _g = PrecisionContext::default().enter_for_order(110);
    let basis = basis();
    let eps = B::of_f64(2f64.powi(-100));
    let delta = embed(&stream_classic::<B>(ClassicKind::Delta).unwrap(), &basis);
    let dprime_stream = stream_classic::<B>(ClassicKind::DeltaPrime).unwrap();
    let dprime = embed(&dprime_stream, &basis);
    let half = B::one() / B::of_int(2);
    for n in 1..=100usize {
        let padded = |mut v: Vec<Cx<B>>| {
            v.resize(n + 2, Cx::zero());
            v
        };
        let lhs = padded(basis.expand(&delta.at(n).unwrap().derive()).unwrap().values);
        let rhs = padded(basis.expand(&dprime.at(n).unwrap()).unwrap().values);
        for k in 0..n {
            assert!(cabs(&(lhs[k].clone() - rhs[k].clone())) <= eps, "n = {n}, k = {k}");
        }
        let rn = B::of_int(n as i64).sqrt();
        let boundary_n = -(half.clone() * rn * hermite_at_zero::<B>(n - 1));
        assert!(cabs(&(lhs[n].clone() - cx(boundary_n))) <= eps);
        let boundary_n1 = -(half.clone() * B::of_int(n as i64 + 1).sqrt() * hermite_at_zero::<B>(n));
        assert!(cabs(&(lhs[n + 1].clone() - cx(boundary_n1))) <= eps);
    }
    // The streams themselves commute exactly: ι(Dδ) uses (Dδ)(h_k) = -δ(h_k').
    let d_delta = stream_classic::<B>(ClassicKind::Delta).unwrap().derive();
    for k in 0..=100 {
        assert!(cabs(&(d_delta.value(k).unwrap() - dprime_stream.value(k).unwrap())) <= eps);
    }
}

#[test]
fn embedded_gaussian_converges_rapidly() {
    let _g = PrecisionContext::default().enter_for_order(220);
    let basis = basis();
    let phi = Gps::gaussian(rate(1, 2), cx(B::one())).unwrap();
    let emb = embed(&stream_general(GeneralKind::FromGps(phi.clone()), &basis).unwrap(), &basis);
    for n in [50usize, 120, 200] {
        let diff = phi.sub(&emb.at(n).unwrap());
        for m in 0..=3 {
            let norm = diff.norm(m).to_f64();
            for s in 0..=3 {
                let v = ((n + 1) as f64).powi(s) * norm;
                if n == 200 {
                    assert!(v < 1e-6, "n = {n}, m = {m}, s = {s}: {v}");
                }
            }
        }
    }
}

#[test]
fn embedded_delta_norm_bound() {
    let _g = PrecisionContext::default().enter_for_order(80);
    let basis = basis();
    let delta = embed(&stream_classic::<B>(ClassicKind::Delta).unwrap(), &basis);
    for m in 0..=2usize {
        let norms: Vec<f64> = (0..=40).map(|n| delta.at(n).unwrap().norm(m).to_f64()).collect();
        let c = norms
            .iter()
            .enumerate()
            .map(|(n, v)| v / ((n + 1) as f64).powi(m as i32 + 1))
            .fold(0.0, f64::max);
        assert!(c.is_finite() && c > 0.0);
        assert!(norms[0] <= c);
        // the bound holds with room: the growth is far below (n+1)^{m+1}
        assert!(norms[40] / 41f64.powi(m as i32 + 1) < norms[0]);
    }
    let rate_ok = delta.at(5).unwrap().is_single_rate(&hermite_rate());
    assert!(rate_ok);
}

#[test]
fn stream_csv_and_descriptor_round_trip() {
    let _g = PrecisionContext::default().enter();
    let basis = basis();
    let s = stream_classic::<B>(ClassicKind::Delta).unwrap();
    let mut out = Vec::new();
    s.write_csv(8, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,coefficient"));
    let first = lines.next().unwrap();
    let value: f64 = first.strip_prefix("0,").unwrap().parse().unwrap();
    assert!((value - 0.6316187777460647).abs() < 1e-15, "{first}");
    let d = s.descriptor().unwrap().clone();
    let rebuilt = CoefficientStream::from_descriptor(&d, &basis).unwrap();
    assert_eq!(rebuilt.value(6).unwrap(), s.value(6).unwrap());
    let _ = poly::zeros::<B>(1);
}
