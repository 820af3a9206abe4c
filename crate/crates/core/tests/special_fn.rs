//! Special functions against a high-precision series oracle and structural identities.

#![allow(clippy::excessive_precision)]

use fracctrl::special::{
    gamma, mittag_leffler, recip_gamma, stable_density, subordination_oracle, varphi_density, MLParams,
    MittagLeffler, OperatorKind,
};
use proptest::prelude::*;

// (α, β, z, E_{α,β}(z)) from a 30-digit series evaluation with guard digits.
const ML_TABLE: [(f64, f64, f64, f64); 80] = [
    (0.669, 0.669, 2.679410021533446, 191.1512423000026134),
    (0.688, 0.428, -0.09718777326948629, 0.38965651181896903403),
    (0.56, 1.0, -0.026138451857876492, 0.97125396349062736609),
    (0.715, 0.715, -186.59725482748271, 6.5645687403954534102e-6),
    (0.81, 0.81, -4.515164355975825, 0.015110735078935421916),
    (0.702, 0.702, -3.636290158190191, 0.024170416110884492357),
    (0.581, 1.222, -0.03482124502578828, 1.0593492513242389943),
    (0.662, 1.0, -0.029789024199344413, 0.96771043554792360942),
    (0.783, 0.783, -3.3084497459238444, 0.031523298233701864765),
    (0.549, 1.0, -1.9209084965741001, 0.25466847779791549695),
    (0.765, 2.765, 2.2659218818538767, 2.9528934080950093428),
    (0.658, 1.0, -0.023797593929362204, 0.97407180157985724179),
    (0.658, 1.658, -22.669833551414317, 0.043345124900342687888),
    (0.652, 0.652, -2.264076103832665, 0.057326039117408627238),
    (0.596, 2.596, -0.8705875067740849, 0.45509998054455353881),
    (0.963, 0.471, -4.3243349454732325, -0.098141379320087763599),
    (0.923, 1.923, -5.421274959922763, 0.17990507046014954273),
    (0.787, 0.787, -221.58126504193942, 3.7723501758952753759e-6),
    (0.738, 0.738, -23.085162679915562, 4.367171404579167531e-4),
    (0.662, 2.662, -0.20376962566499227, 0.5994933194059624227),
    (0.697, 0.697, 1.7773205477017302, 18.083428397985331953),
    (0.801, 1.0, -34.18784662758673, 6.5785235995264561932e-3),
    (0.579, 2.5789999999999997, -69.01712099120081, 0.014254998602544566012),
    (0.748, 2.748, -3.3683994057371534, 0.21558240311401030185),
    (0.926, 2.102, -0.19086965862708025, 0.86776392966576157178),
    (0.711, 2.711, -181.21781312766856, 5.4844662913762858486e-3),
    (0.589, 1.0, -10.694899652986965, 0.044518146778113026366),
    (0.526, 1.0, -0.16167186519834925, 0.84062882684874776705),
    (0.522, 1.522, -6.384651580536407, 0.14339074649428911194),
    (0.667, 0.576, -131.35689369917276, -6.4076743242303295971e-4),
    (0.821, 2.8209999999999997, 3.8998474535303638, 10.976131992818544177),
    (0.922, 2.922, -0.677829241844639, 0.42293975942267355771),
    (0.701, 2.701, -0.019334813150078504, 0.64044762445293668192),
    (0.551, 1.0, -0.03203835453827475, 0.96491723939397105949),
    (0.796, 0.525, -0.049638504478075676, 0.5384650955036640249),
    (0.567, 0.567, -0.021059674300926156, 0.61495718220482958403),
    (0.616, 1.616, -90.46325611183715, 0.011001127033782318883),
    (0.797, 0.797, -80.37294128553508, 2.8157876985185715675e-5),
    (0.977, 2.977, -0.27196977714663007, 0.46589258343559119535),
    (0.586, 1.5859999999999999, -1.5909661522544405, 0.44550083894224453873),
    (0.838, 1.0, 2.641286975210624, 28.847859672996830212),
    (0.587, 0.587, -30.722575054241904, 2.9546267786172185189e-4),
    (0.657, 0.657, -15.940620227097721, 1.0693854598104370715e-3),
    (0.64, 1.0, -0.43271542940619184, 0.64553688817676239007),
    (0.622, 1.491, -0.32844221869738693, 0.87404009398142575697),
    (0.623, 1.0, -51.04597342177682, 8.3862922732049079421e-3),
    (0.896, 1.0, -0.08310415225451086, 0.91748064656131348891),
    (0.747, 0.747, -43.10473986657828, 1.1771500374496399141e-4),
    (0.737, 0.726, -219.16906653327095, -4.5495655893831454901e-5),
    (0.726, 1.726, -202.228450417369, 4.9374392073396032639e-3),
    (0.688, 1.0, 1.688687399192652, 12.235398141446460111),
    (0.742, 2.468, -73.45196616361228, 0.014715309198166704383),
    (0.741, 0.741, -69.08511993317434, 4.5739895016492917821e-5),
    (0.575, 1.0, -1.5810682776618514, 0.29485671838627346263),
    (0.602, 1.6019999999999999, -0.02506394017636649, 1.0965600354888092755),
    (0.955, 2.955, -0.7020682969442298, 0.41179332538163241953),
    (0.956, 1.0, -370.098086354727, 1.2237277212512682236e-4),
    (0.533, 2.533, -49.3011036061872, 0.019826888478640305095),
    (0.587, 2.5869999999999997, -10.554414512329677, 0.085347759026354721635),
    (0.681, 1.0, -0.012543672364019128, 0.9862711381431330759),
    (0.888, 0.888, 4.668124025287134, 396.44671402842784969),
    (0.72, 1.0, -0.01345151306807118, 0.98540073299684594584),
    (0.618, 1.403, -0.31590086592588884, 0.87138093979485598396),
    (0.77, 0.77, -153.48942496647865, 8.374663045595262505e-6),
    (0.683, 1.308, -56.13275385914484, 0.012435247514782371363),
    (0.758, 2.12, -0.0399494671938309, 0.92435157012787894139),
    (0.59, 2.59, -37.318856046252904, 0.026003092206714359366),
    (0.8, 1.0, -0.06205758576849874, 0.935986075671474968),
    (0.738, 1.895, -0.01923420854987423, 1.0286041499420358424),
    (0.834, 2.834, -40.518502550007234, 0.024029360897011445002),
    (0.569, 1.0, 0.21099447355647005, 1.2856091536248160908),
    (0.565, 0.565, -31.330581528199325, 2.8655670623093584479e-4),
    (0.94, 1.275, -300.2321233231461, 1.2528047551608042173e-3),
    (0.799, 1.799, -1.204455181893312, 0.55742785926652136954),
    (0.765, 1.0, -16.45895500709168, 0.016802044452826364557),
    (0.923, 1.923, -175.71441126378204, 5.6884317087932717958e-3),
    (0.931, 2.931, -0.042738414338288275, 0.52402045989493524143),
    (0.576, 0.576, -12.226863295320102, 1.9100871273759844058e-3),
    (0.717, 1.717, -40.37436259229461, 0.024571087073896596427),
    (0.933, 1.933, -0.04546774236243824, 1.002023928206184557),
];

fn ml(a: f64, b: f64, z: f64) -> f64 {
    mittag_leffler(MLParams::new(a, b).unwrap(), z).unwrap()
}

#[test]
fn direct_evaluator_matches_table() {
    for &(a, b, z, want) in ML_TABLE.iter() {
        let got = ml(a, b, z);
        let rel = (got - want).abs() / want.abs().max(1e-300);
        assert!(rel < 1e-10, "E_{{{a},{b}}}({z}) = {got}, want {want}, rel {rel:e}");
    }
}

#[test]
fn tabulated_evaluator_matches_table() {
    for &(a, b, z, want) in ML_TABLE.iter() {
        let t = MittagLeffler::new(MLParams::new(a, b).unwrap()).unwrap_or_else(|e| panic!("({a}, {b}): {e}"));
        let got = t.eval(z);
        let rel = (got - want).abs() / want.abs().max(1e-300);
        assert!(rel < 1e-9, "E_{{{a},{b}}}({z}) = {got}, want {want}, rel {rel:e}");
    }
}

#[test]
fn exponential_and_gamma_special_cases() {
    for &z in &[-30.0, -2.5, 0.0, 1.5] {
        assert!((ml(1.0, 1.0, z) - f64::exp(z)).abs() <= 1e-13 * f64::exp(z).max(1e-300) + 1e-300);
    }
    assert!((gamma(0.5).unwrap() - std::f64::consts::PI.sqrt()).abs() < 1e-14);
    assert_eq!(recip_gamma(-2.0), 0.0);
}

#[test]
fn bridge_lattice() {
    for &a in &[0.6, 0.7, 0.8, 0.9] {
        for &mu in &[0.0, 1.0, 4.0, 16.0, 100.0] {
            let sub = subordination_oracle(a, mu, 1.0, OperatorKind::T, 4000).unwrap();
            assert!((sub - ml(a, 1.0, -mu)).abs() <= 1e-6, "T α={a} μ={mu}");
            let hat = subordination_oracle(a, mu, 1.0, OperatorKind::THat, 4000).unwrap();
            assert!((hat - ml(a, a, -mu)).abs() <= 1e-6, "T̂ α={a} μ={mu}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn zero_argument(a in 0.05f64..1.0, b in 0.1f64..3.0) {
        let v = ml(a, b, 0.0);
        prop_assert!((v - recip_gamma(b)).abs() <= 1e-14 * recip_gamma(b).abs().max(1.0));
    }

    #[test]
    fn shift_recurrence(a in 0.55f64..0.99, b in 0.5f64..1.5, x in 0.0f64..200.0) {
        // E_{α,β}(z) = 1/Γ(β) + z E_{α,α+β}(z)
        let z = -x;
        let lhs = ml(a, b, z);
        let rhs = recip_gamma(b) + z * ml(a, a + b, z);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs()), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn completely_monotone_on_negative_axis(a in 0.5f64..1.0, x in 0.0f64..500.0, dx in 1e-3f64..10.0) {
        let e1 = ml(a, 1.0, -x);
        let e2 = ml(a, 1.0, -x - dx);
        prop_assert!(e1 > 0.0 && e2 > 0.0);
        prop_assert!(e2 <= e1);
        let h = ml(a, a, -x);
        prop_assert!(h > 0.0 && h <= recip_gamma(a) * (1.0 + 1e-12));
    }

    #[test]
    fn tabulated_agrees_with_direct(a in 0.55f64..0.99, x in 0.0f64..5000.0) {
        let t = MittagLeffler::new(MLParams::new(a, a).unwrap()).unwrap();
        let d = ml(a, a, -x);
        prop_assert!((t.eval(-x) - d).abs() <= 1e-9 * d.abs() + 1e-15);
    }

    #[test]
    fn densities_are_nonnegative(q in 0.55f64..0.95, xi in 1e-3f64..20.0) {
        prop_assert!(stable_density(q, xi).unwrap() >= 0.0);
        prop_assert!(varphi_density(q, xi).unwrap() >= 0.0);
    }
}
