//! Engine output against hand-derived closed forms.

use hsx_core::asymptotics::{h1_error, leading_term, linf_error, Region};
use hsx_core::{EquationForm, InitialData, VelocityProfile};

const A: EquationForm = EquationForm::OneSided;

struct Dirac {
    k: f64,
    l: f64,
    x0: f64,
}

impl Dirac {
    fn xbar(&self, a: f64) -> f64 {
        if a < self.x0 {
            a
        } else if a <= self.x0 + self.l {
            self.x0
        } else {
            a - self.l
        }
    }

    fn y(&self, a: f64, t: f64) -> f64 {
        let (k, l, x0) = (self.k, self.l, self.x0);
        if a < x0 {
            a + k * t
        } else if a <= x0 + l {
            x0 + k * t + t * t / 4.0 * (a - x0)
        } else {
            a - l + k * t + t * t / 4.0 * l
        }
    }

    fn alpha_scaled(&self, xi: f64, t: f64) -> f64 {
        let (k, l, x0) = (self.k, self.l, self.x0);
        let edge = 4.0 / (t * t) * (x0 + k * t);
        if xi < edge {
            t * t / 4.0 * xi - k * t
        } else if xi <= edge + l {
            xi + x0 - 4.0 / t * k - 4.0 / (t * t) * x0
        } else {
            t * t / 4.0 * (xi - l) - k * t + l
        }
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()))
}

#[test]
fn dirac_example_spot_points() {
    for (k, l, x0) in [(1.0, 4.0, 0.0), (-0.5, 2.0, 1.5), (2.0, 1.0, -3.0)] {
        let oracle = Dirac { k, l, x0 };
        let d = InitialData::example_dirac(k, l, x0).unwrap();
        for i in 0..20 {
            let a = x0 - 5.0 + i as f64 * (l + 10.0) / 19.0;
            assert!(close(d.xbar(a), oracle.xbar(a)), "xbar({a})");
            for t in [-3.0, 0.7, 2.0, 11.0] {
                assert!(close(d.y(a, t, A), oracle.y(a, t)), "y({a}, {t})");
            }
        }
        for i in 0..20 {
            let xi = -3.0 + i as f64 * (l + 6.0) / 19.0;
            for t in [-3.0, 0.7, 2.0, 11.0] {
                let got = d.alpha_scaled(xi, t, A).unwrap();
                assert!(close(got, oracle.alpha_scaled(xi, t)), "alpha({xi}, {t}) = {got}");
            }
        }
    }
}

#[test]
fn dirac_rescaled_limit_does_not_depend_on_k_or_x0() {
    let sets = [(1.0, 4.0, 0.0), (-2.0, 4.0, 3.0)];
    for xi in [-1.0f64, 0.5, 2.0, 5.0] {
        let v = xi.clamp(0.0, 4.0);
        for t in [1e2, 1e3, 1e4] {
            let vals: Vec<f64> = sets
                .iter()
                .map(|&(k, l, x0)| {
                    let d = InitialData::example_dirac(k, l, x0).unwrap();
                    2.0 / t * d.evaluate_u(t * t / 4.0 * xi, t, A)
                })
                .collect();
            for w in &vals {
                assert!((w - v).abs() <= 10.0 / t, "xi={xi} t={t} {w} vs {v}");
            }
        }
    }
}

#[test]
fn compact_solution_formula() {
    // u = 0 left of 0, −2x/(2 − t) on the image of (0, 1), constant beyond
    let c = InitialData::example_compact();
    for t in [0.5, 1.0, 1.5, 3.0, 4.0, 10.0] {
        let right = (1.0 - t / 2.0) * (1.0 - t / 2.0);
        for i in 0..=10 {
            let x = right * i as f64 / 10.0;
            let want = -2.0 * x / (2.0 - t);
            assert!((c.evaluate_u(x, t, A) - want).abs() < 1e-13, "t={t} x={x}");
        }
        assert_eq!(c.evaluate_u(-1.0, t, A), 0.0);
    }
}

#[test]
fn compact_error_norms() {
    let c = InitialData::example_compact();
    for t in [3.0, 4.0, 10.0, 100.0, 1e4] {
        assert!((linf_error(&c, t, Region::All, A).unwrap() - 1.0).abs() < 1e-9);
    }
    for t in [4.0, 16.0, 256.0, 4096.0] {
        let h = h1_error(&c, t, Region::All, A).unwrap();
        assert!((h * h - 4.0 / t).abs() < 1e-9);
    }
}

#[test]
fn leading_term_norms() {
    let d = InitialData::example_kink(3.0).unwrap();
    for t in [-7.0f64, 2.0, 40.0] {
        let far = t * t;
        let sup = (0..=1000)
            .map(|i| {
                leading_term(&d, -far + 2.0 * far * i as f64 / 1000.0, t, A)
                    .unwrap()
                    .abs()
            })
            .fold(0.0, f64::max);
        assert!((sup - t.abs() / 2.0 * 3.0).abs() < 1e-12);
        // slope 2/t on a support of length t²M/4
        let h1 = (2.0 / t).powi(2) * t * t / 4.0 * 3.0;
        assert!((h1 - 3.0).abs() < 1e-12);
    }
}

#[test]
fn convergence_of_scaled_labels() {
    // α(ξ, t) − x̄(α(ξ, t)) → v(ξ)
    let u = VelocityProfile::new(&[(-1.0, 0.5), (0.0, -0.5), (2.0, 1.0)]).unwrap();
    let d = InitialData::build(u, &[(0.5, 1.0)]).unwrap();
    let m = d.total_mass();
    for xi in [-1.0f64, 0.3 * m, 0.8 * m, 2.0 * m] {
        let mut last = f64::INFINITY;
        for t in [1e2, 1e3, 1e4, 1e5] {
            let a = d.alpha_scaled(xi, t, A).unwrap();
            let gap = (d.excess(a) - xi.clamp(0.0, m)).abs();
            assert!(gap <= last + 1e-12);
            last = gap;
        }
        assert!(last < 1e-3, "xi={xi} gap={last}");
    }
    // compact support: t (α_l − x̄(α_l)) stays bounded
    let bound = (1..8)
        .map(|k| {
            let t = 10f64.powi(k);
            let a = d.alpha_l(t, A).unwrap();
            t * d.excess(a)
        })
        .fold(0.0, f64::max);
    assert!(bound < 10.0);
}
