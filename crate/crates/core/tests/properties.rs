use proptest::prelude::*;

use cvnn_core::networks::{mvn_correct, MvnNeuron};
use cvnn_core::{
    cost, deep_cost, shallow_cost, ArchKind, ComplexScalar, DeepSpec, Meter, Mode, Network,
    ShallowSpec, TrainConfig,
};

fn arch() -> impl Strategy<Value = ArchKind> {
    prop::sample::select(ArchKind::ALL.to_vec())
}

fn unit(t: f64) -> ComplexScalar {
    ComplexScalar::new(t.cos(), t.sin())
}

fn complex() -> impl Strategy<Value = ComplexScalar> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| ComplexScalar::new(re, im))
}

proptest! {
    #[test]
    fn deep_reduces_to_shallow(a in arch(), p in 1usize..200, r in 1usize..200, n in 1usize..200) {
        prop_assume!(a.supports_deep());
        let s = ShallowSpec::new(a, p, r, n).unwrap();
        let d = DeepSpec::from_shallow(&s).unwrap();
        for mode in Mode::ALL {
            prop_assert_eq!(deep_cost(&d, mode).unwrap(), shallow_cost(&s, mode).unwrap());
        }
    }

    #[test]
    fn costs_grow_with_every_size(a in arch(), p in 1usize..100, r in 1usize..100, n in 1usize..100) {
        for mode in Mode::ALL {
            let base = shallow_cost(&ShallowSpec::new(a, p, r, n).unwrap(), mode).unwrap();
            prop_assert!(shallow_cost(&ShallowSpec::new(a, p + 1, r, n).unwrap(), mode).unwrap() > base);
            prop_assert!(shallow_cost(&ShallowSpec::new(a, p, r + 1, n).unwrap(), mode).unwrap() > base);
            prop_assert!(shallow_cost(&ShallowSpec::new(a, p, r, n + 1).unwrap(), mode).unwrap() > base);
        }
    }

    #[test]
    fn training_exceeds_inference(a in arch(), p in 1usize..100, r in 1usize..100, n in 1usize..100) {
        let s = ShallowSpec::new(a, p, r, n).unwrap();
        prop_assert!(shallow_cost(&s, Mode::Training).unwrap() > shallow_cost(&s, Mode::Inference).unwrap());
    }

    #[test]
    fn deep_training_exceeds_inference(
        a in prop::sample::select(ArchKind::DEEP.to_vec()),
        p in 1usize..20,
        layers in prop::collection::vec(1usize..20, 2..6),
    ) {
        let d = if a == ArchKind::Ptrbf {
            DeepSpec::ptrbf(p, layers.clone(), layers).unwrap()
        } else {
            DeepSpec::perceptron(a, p, layers).unwrap()
        };
        prop_assert!(deep_cost(&d, Mode::Training).unwrap() > deep_cost(&d, Mode::Inference).unwrap());
    }

    #[test]
    fn metered_counts_match(a in arch(), p in 1usize..6, r in 1usize..6, n in 1usize..8, seed in any::<u64>(),
                            x in prop::collection::vec(complex(), 6), d in prop::collection::vec(complex(), 6)) {
        let spec: cvnn_core::NetworkSpec = ShallowSpec::new(a, p, r, n).unwrap().into();
        let mut net = Network::build(spec.clone(), seed).unwrap();
        let mut m = Meter::with_event_log();
        net.train_step(&x[..p], &d[..r], &TrainConfig::default(), &mut m).unwrap();
        prop_assert_eq!(m.total().unwrap(), cost(&spec, Mode::Training).unwrap());
        let logged: u64 = m.events().unwrap().iter().map(|e| e.cost()).sum();
        prop_assert_eq!(logged, m.total().unwrap());
    }

    #[test]
    fn mvn_unit_step_is_exact(angles in prop::collection::vec(-3.2..3.2f64, 1..12),
                              w in prop::collection::vec(complex(), 12), b in complex(), t in -3.2..3.2f64) {
        let x: Vec<ComplexScalar> = angles.iter().map(|&a| unit(a)).collect();
        let mut neuron = MvnNeuron::new(w[..x.len()].to_vec(), b);
        let z = mvn_correct(&mut neuron, &x, unit(t), 1.0, &mut Meter::new()).unwrap();
        let err = z - unit(t);
        prop_assert!(err.re.hypot(err.im) < 1e-9);
    }
}
