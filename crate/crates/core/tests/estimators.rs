use olct_core::gen::fixtures;
use olct_core::spectral::boas_highpass_estimate;
use olct_core::*;

fn sweep() -> Vec<OlctParams> {
    vec![special_params(SpecialCase::Fourier).unwrap(), OlctParams::new(1.0, 1.0, 1.0, 2.0, 1.0, 0.0).unwrap()]
}

#[test]
fn paley_wiener_recovers_designed_bandwidth() {
    for p in sweep() {
        for gamma in [1.0, 2.0] {
            let f = fixtures::paley_wiener(&p, gamma).unwrap();
            let seq = pw_bandwidth_estimate(&p, &f, 16).unwrap();
            assert!((seq.estimate / gamma - 1.0).abs() <= 0.05, "{p} gamma {gamma}: {}", seq.estimate);
            assert!(seq.roots.iter().all(|&r| r <= 1.02 * gamma));
        }
    }
}

#[test]
fn boas_recovers_reciprocal_gap() {
    for p in sweep() {
        for gamma in [1.0, 2.0] {
            let f = fixtures::boas(&p, gamma).unwrap();
            let seq = boas_highpass_estimate(&p, &f, 16).unwrap();
            assert!((seq.estimate * gamma - 1.0).abs() <= 0.10, "{p} gamma {gamma}: {}", seq.estimate);
        }
    }
}

#[test]
fn zero_signal_is_degenerate() {
    let p = sweep()[0];
    let z = SampledSignal::zeros(Grid::centered(0.1, 256).unwrap());
    assert!(matches!(pw_bandwidth_estimate(&p, &z, 8), Err(OlctError::DegenerateInput(_))));
}

#[test]
fn gaussian_delta_root_sequence_grows() {
    let p = sweep()[1];
    let f = olct_core::suite::gaussian_fixture(0.0);
    let seq = pw_bandwidth_estimate(&p, &f, 8).unwrap();
    assert!(seq.roots.windows(2).all(|w| w[1] >= w[0] - 1e-9));
}
