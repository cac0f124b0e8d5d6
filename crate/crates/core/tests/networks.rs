use cvnn_core::cost_model::Mode;
use cvnn_core::networks::{mvn_correct, shallow, MvnNeuron, WIDTH_FLOOR};
use cvnn_core::numerics::{MultKind, Phase};
use cvnn_core::{
    cost, ArchKind, ComplexScalar, DeepSpec, Meter, Network, NetworkError, TrainConfig,
};

fn c(re: f64, im: f64) -> ComplexScalar {
    ComplexScalar::new(re, im)
}

fn inputs(len: usize) -> Vec<ComplexScalar> {
    (0..len)
        .map(|k| c((0.4 + k as f64).sin() * 0.9, (1.3 * k as f64).cos() * 0.7))
        .collect()
}

fn targets(len: usize) -> Vec<ComplexScalar> {
    (0..len)
        .map(|k| c(0.5 - 0.2 * k as f64, 0.3 + 0.1 * k as f64))
        .collect()
}

fn infer_count(net: &Network) -> u64 {
    let mut m = Meter::new();
    net.infer(&inputs(net.spec().inputs()), &mut m).unwrap();
    m.total().unwrap()
}

fn train_meter(net: &mut Network) -> Meter {
    let mut m = Meter::new();
    let (p, r) = (net.spec().inputs(), net.spec().outputs());
    net.train_step(&inputs(p), &targets(r), &TrainConfig::default(), &mut m)
        .unwrap();
    m
}

#[test]
fn cvfnn_beamforming_inference_count() {
    let net = Network::build(shallow(ArchKind::Cvfnn, 6, 3, 97).unwrap(), 1).unwrap();
    assert_eq!(infer_count(&net), 3492);
}

#[test]
fn crbf_small_inference_count() {
    let net = Network::build(shallow(ArchKind::Crbf, 2, 1, 3).unwrap(), 1).unwrap();
    assert_eq!(infer_count(&net), 21);
}

#[test]
fn ptrbf_beamforming_training_count() {
    let mut net = Network::build(shallow(ArchKind::Ptrbf, 6, 3, 100).unwrap(), 1).unwrap();
    assert_eq!(train_meter(&mut net).total().unwrap(), 7212);
}

#[test]
fn unit_cvfnn_training_count() {
    let mut net = Network::build(shallow(ArchKind::Cvfnn, 1, 1, 1).unwrap(), 1).unwrap();
    assert_eq!(train_meter(&mut net).total().unwrap(), 36);
}

#[test]
fn forward_subcount_equals_inference() {
    for arch in ArchKind::ALL {
        let spec = shallow(arch, 3, 2, 5).unwrap();
        let mut net = Network::build(spec.clone(), 2).unwrap();
        let inference = infer_count(&net);
        let m = train_meter(&mut net);
        let counts = m.snapshot().unwrap();
        assert_eq!(counts.phase_total(Phase::Forward), inference, "{arch}");
        assert_eq!(inference, cost(&spec, Mode::Inference).unwrap(), "{arch}");
        assert_eq!(
            counts.grand_total(),
            cost(&spec, Mode::Training).unwrap(),
            "{arch}"
        );
    }
}

#[test]
fn event_log_agrees_with_counter() {
    let mut net = Network::build(
        DeepSpec::perceptron(ArchKind::Mlmvn, 3, vec![4, 3, 2]).unwrap(),
        5,
    )
    .unwrap();
    let mut m = Meter::with_event_log();
    net.train_step(&inputs(3), &targets(2), &TrainConfig::default(), &mut m)
        .unwrap();
    let logged: u64 = m.events().unwrap().iter().map(|e| e.cost()).sum();
    assert_eq!(logged, m.total().unwrap());
    let counts = m.snapshot().unwrap();
    for kind in MultKind::ALL {
        let n = m
            .events()
            .unwrap()
            .iter()
            .filter(|e| e.kind == kind)
            .count() as u64;
        assert_eq!(
            n,
            Phase::ALL
                .iter()
                .map(|&p| counts.occurrences(p, kind))
                .sum::<u64>()
        );
    }
}

#[test]
fn scfnn_zero_parameters_give_zero_output() {
    let mut net = Network::build(shallow(ArchKind::Scfnn, 4, 2, 3).unwrap(), 3).unwrap();
    net.set_parameters(&vec![0.0; net.parameter_count()])
        .unwrap();
    let y = net.infer(&inputs(4), &mut Meter::new()).unwrap();
    assert!(y.iter().all(|z| *z == ComplexScalar::ZERO));
}

#[test]
fn mlmvn_activations_on_unit_circle() {
    let net = Network::build(
        DeepSpec::perceptron(ArchKind::Mlmvn, 3, vec![5, 4, 2]).unwrap(),
        7,
    )
    .unwrap();
    for (_, out) in net.perceptron_trace(&inputs(3)).unwrap().unwrap() {
        for y in out {
            assert!((y.re.hypot(y.im) - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn rbf_activation_ranges() {
    for arch in [ArchKind::Crbf, ArchKind::Ptrbf] {
        let net = Network::build(shallow(arch, 3, 2, 6).unwrap(), 11).unwrap();
        for phi in net.rbf_activations(&inputs(3)).unwrap().unwrap() {
            assert!(phi.re > 0.0 && phi.re <= 1.0, "{arch}");
            if arch == ArchKind::Crbf {
                assert_eq!(phi.im, 0.0);
            } else {
                assert!(phi.im > 0.0 && phi.im <= 1.0);
            }
        }
    }
}

#[test]
fn crbf_widths_start_positive_and_stay_floored() {
    let mut net = Network::build(shallow(ArchKind::Crbf, 2, 1, 4).unwrap(), 1).unwrap();
    let w = net.rbf_widths().unwrap();
    assert_eq!(w.len(), 4);
    assert!(w.iter().all(|&v| v > 0.0));
    let big = TrainConfig {
        width_rate: 1e6,
        ..TrainConfig::default()
    };
    for _ in 0..5 {
        net.train_step(&inputs(2), &[c(5.0, -5.0)], &big, &mut Meter::new())
            .unwrap();
    }
    assert!(net.rbf_widths().unwrap().iter().all(|&v| v >= WIDTH_FLOOR));
}

#[test]
fn fixed_point_leaves_parameters_unchanged() {
    for arch in [
        ArchKind::Cvfnn,
        ArchKind::Scfnn,
        ArchKind::Crbf,
        ArchKind::Fcrbf,
        ArchKind::Ptrbf,
    ] {
        let mut net = Network::build(shallow(arch, 2, 2, 3).unwrap(), 4).unwrap();
        let x = inputs(2);
        let d = net.infer(&x, &mut Meter::new()).unwrap();
        let before = net.parameters();
        net.train_step(&x, &d, &TrainConfig::default(), &mut Meter::new())
            .unwrap();
        assert_eq!(before, net.parameters(), "{arch}");
    }
}

#[test]
fn cvfnn_repeated_steps_settle() {
    let mut net = Network::build(shallow(ArchKind::Cvfnn, 3, 2, 4).unwrap(), 8).unwrap();
    let (x, d) = (inputs(3), targets(2));
    let losses: Vec<f64> = (0..100)
        .map(|_| {
            net.train_step(&x, &d, &TrainConfig::uniform(0.01), &mut Meter::new())
                .unwrap()
        })
        .collect();
    for w in losses[10..].windows(2) {
        assert!(w[1] <= w[0], "loss rose from {} to {}", w[0], w[1]);
    }
}

#[test]
fn dimension_mismatch_is_an_error() {
    let mut net = Network::build(shallow(ArchKind::Fcrbf, 2, 2, 3).unwrap(), 4).unwrap();
    let err = net.infer(&inputs(3), &mut Meter::new()).unwrap_err();
    assert!(matches!(
        err,
        NetworkError::Dimension {
            expected: 2,
            got: 3,
            ..
        }
    ));
    let err = net
        .train_step(
            &inputs(2),
            &targets(1),
            &TrainConfig::default(),
            &mut Meter::new(),
        )
        .unwrap_err();
    assert!(matches!(err, NetworkError::Dimension { .. }));
}

#[test]
fn invalid_rates_rejected() {
    let mut net = Network::build(shallow(ArchKind::Cvfnn, 1, 1, 1).unwrap(), 4).unwrap();
    let cfg = TrainConfig {
        learning_rate: f64::NAN,
        ..TrainConfig::default()
    };
    assert!(net
        .train_step(&inputs(1), &targets(1), &cfg, &mut Meter::new())
        .is_err());
}

#[test]
fn rbf_deep_build_not_applicable() {
    let spec = DeepSpec {
        arch: ArchKind::Fcrbf,
        inputs: 2,
        neurons: vec![3, 2],
        bottlenecks: None,
    };
    assert!(Network::build(spec, 0).is_err());
}

#[test]
fn builds_are_deterministic() {
    let spec = DeepSpec::ptrbf(3, vec![4, 5], vec![3, 2]).unwrap();
    let mut a = Network::build(spec.clone(), 99).unwrap();
    let mut b = Network::build(spec, 99).unwrap();
    assert_eq!(a, b);
    let ma = train_meter(&mut a);
    let mb = train_meter(&mut b);
    assert_eq!(a.parameters(), b.parameters());
    assert_eq!(ma.snapshot().unwrap(), mb.snapshot().unwrap());
}

#[test]
fn mvn_examples() {
    // n = 2, x = (1, i), d = -1
    let x = [ComplexScalar::ONE, ComplexScalar::I];
    let mut n = MvnNeuron::new(vec![c(0.3, 0.2), c(-1.1, 0.4)], c(0.5, -0.5));
    let z = mvn_correct(&mut n, &x, c(-1.0, 0.0), 1.0, &mut Meter::new()).unwrap();
    assert!((z.re + 1.0).abs() < 1e-12 && z.im.abs() < 1e-12);

    // zero error leaves the neuron unchanged
    let before = n.clone();
    mvn_correct(&mut n, &x, z, 1.0, &mut Meter::new()).unwrap();
    assert_eq!(n, before);

    // off-circle input: the exactness contract does not apply
    let x = [c(2.0, 0.0), ComplexScalar::I];
    let z = mvn_correct(&mut n, &x, c(-1.0, 0.0), 1.0, &mut Meter::new()).unwrap();
    assert!((z.re + 1.0).abs() > 1e-6);
}
