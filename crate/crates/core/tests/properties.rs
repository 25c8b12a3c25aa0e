use num_rational::Ratio;
use proptest::prelude::*;
use torext::heisenberg::kappa;
use torext::verify::generate::{trial_seed, Gen};
use torext::verify::{CheckRecord, Environment, Report, SuiteConfig};
use torext::{FourierScalar, GridSpec, HeisenbergElement, KClass, KForm};

type Q = Ratio<i64>;

fn spec() -> GridSpec {
    GridSpec::new(2, 8).unwrap()
}

fn one_form(g: &mut Gen) -> KForm {
    KForm::one_form(vec![g.scalar(spec(), 1.0), g.scalar(spec(), 1.0)]).unwrap()
}

fn rational() -> impl Strategy<Value = Q> {
    (-9i64..=9, 1i64..=9).prop_map(|(n, d)| Q::new(n, d))
}

fn element() -> impl Strategy<Value = HeisenbergElement<Q>> {
    (
        rational(),
        rational(),
        prop::collection::vec((prop_oneof![-4i64..=-1, 1i64..=4], rational()), 0..6),
    )
        .prop_map(|(c, z, modes)| HeisenbergElement::new(c, z, modes))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn product_is_commutative_and_distributive(seed in any::<u64>()) {
        let mut g = Gen::new(seed, 2);
        let (a, b, c) = (g.scalar(spec(), 1.0), g.scalar(spec(), 1.0), g.scalar(spec(), 1.0));
        let ab = a.multiply(&b).unwrap();
        prop_assert!(ab.max_abs_diff(&b.multiply(&a).unwrap()) < 1e-15);
        let lhs = a.multiply(&(&b + &c)).unwrap();
        let rhs = &ab + &a.multiply(&c).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-15);
        prop_assert!(!ab.is_lossy());
    }

    #[test]
    fn wedge_of_one_forms_anticommutes(seed in any::<u64>()) {
        let mut g = Gen::new(seed, 2);
        let (w, e) = (one_form(&mut g), one_form(&mut g));
        let sum = w.wedge(&e).unwrap().add(&e.wedge(&w).unwrap()).unwrap();
        prop_assert!(sum.max_abs_coeff() < 1e-15);
        prop_assert!(w.wedge(&w).unwrap().max_abs_coeff() < 1e-15);
    }

    #[test]
    fn projection_is_linear(seed in any::<u64>(), s in -3.0f64..3.0) {
        let mut g = Gen::new(seed, 2);
        let (w, e) = (one_form(&mut g), one_form(&mut g));
        let lhs = KClass::project(&w.add(&e.scale(s)).unwrap()).unwrap();
        let rhs = KClass::project(&w).unwrap().add(&KClass::project(&e).unwrap().scale(s)).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-14);
    }

    #[test]
    fn band_limited_products_are_exact_on_the_grid(seed in any::<u64>()) {
        let mut g = Gen::new(seed, 2);
        let (a, b) = (g.scalar(spec(), 1.0), g.scalar(spec(), 1.0));
        let ab = a.multiply(&b).unwrap().to_grid();
        let direct: Vec<f64> = a.to_grid().iter().zip(b.to_grid()).map(|(x, y)| x * y).collect();
        let err = ab.iter().zip(&direct).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        prop_assert!(err < 1e-14);
    }

    #[test]
    fn heisenberg_group_is_exact(x in element(), y in element(), z in element()) {
        prop_assert_eq!(x.h_multiply(&y).h_multiply(&z), x.h_multiply(&y.h_multiply(&z)));
        prop_assert_eq!(x.h_multiply(&x.inverse()), HeisenbergElement::identity());
        prop_assert_eq!(
            kappa(&x, &y) + kappa(&x.h_multiply(&y), &z),
            kappa(&x, &y.h_multiply(&z)) + kappa(&y, &z)
        );
    }

    #[test]
    fn report_json_round_trips(residual in prop::option::of(-1e300f64..1e300), trials in 1usize..100) {
        let mut r = Report::new(Environment::from_config(&SuiteConfig::default(), vec!["s".into()]));
        r.checks.push(CheckRecord {
            id: "s.c".into(),
            suite: "s".into(),
            anchor: "x = x".into(),
            inputs_digest: "ab".into(),
            residual,
            tolerance: 1e-8,
            pass: false,
            trials,
            diagnostics: vec!["note".into()],
            wall_time_ms: None,
        });
        let text = r.to_json();
        prop_assert_eq!(r.to_csv().unwrap().lines().count(), 2);
        prop_assert_eq!(Report::from_json(&text).unwrap(), r);
    }

    #[test]
    fn trial_seeds_separate_checks_and_trials(seed in any::<u64>(), t in 0usize..1000) {
        prop_assert_ne!(trial_seed(seed, "a.x", t), trial_seed(seed, "a.y", t));
        prop_assert_ne!(trial_seed(seed, "a.x", t), trial_seed(seed, "a.x", t + 1));
    }
}

#[test]
fn constants_survive_scalar_ops() {
    let c = FourierScalar::constant(spec(), 2.5);
    assert_eq!(c.multiply(&c).unwrap().integrate_mean(), 6.25);
    assert!(c.differentiate(0).unwrap().is_zero());
}
