use num_complex::Complex64;
use olct_cli::io::{read_signal, read_spectrum, write_signal, write_spectrum, IoError, SignalFile};
use olct_core::{olct_fast, Grid, OlctParams, SampledSignal};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn finite() -> impl Strategy<Value = f64> {
    any::<f64>().prop_filter("finite", |v| v.is_finite())
}

proptest! {
    #[test]
    fn csv_round_trip_is_bit_exact(
        values in prop::collection::vec((finite(), finite()), 2..64),
        x0 in -1e12f64..1e12,
        dx in 1e-12f64..1e6,
    ) {
        let samples: Vec<Complex64> = values.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
        let s = SampledSignal::new(x0, dx, samples).unwrap();
        let back = SignalFile::parse(&SignalFile::from_signal(&s).to_csv()).unwrap().into_signal().unwrap();
        prop_assert_eq!(back.x_start().to_bits(), s.x_start().to_bits());
        prop_assert_eq!(back.dx().to_bits(), s.dx().to_bits());
        for (a, b) in back.samples().iter().zip(s.samples()) {
            prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
            prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }
}

#[test]
fn random_signal_file_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let samples: Vec<Complex64> =
        (0..1000).map(|_| Complex64::new(rng.random_range(-1e3..1e3), rng.random::<f64>() * 1e-200)).collect();
    let s = SampledSignal::new(-3.25, 0.013, samples).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    write_signal(&path, &s).unwrap();
    assert_eq!(read_signal(&path).unwrap(), s);
}

#[test]
fn spectrum_header_restores_params() {
    let p: OlctParams = "1,1,1,2,1,0".parse().unwrap();
    let f = SampledSignal::from_fn(Grid::centered(0.1, 128).unwrap(), |x| Complex64::new((-x * x).exp(), 0.0));
    let spec = olct_fast(&p, &f).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("F.csv");
    write_spectrum(&path, &spec).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("# params=1,1,1,2,1,0\n"));
    let back = read_spectrum(&path).unwrap();
    assert_eq!(*back.params(), p);
    assert_eq!(back, spec);
}

#[test]
fn short_file_is_header_mismatch() {
    let s = SampledSignal::zeros(Grid::new(0.0, 1.0, 100).unwrap());
    let text = SignalFile::from_signal(&s).to_csv();
    let truncated: String = text.lines().take(text.lines().count() - 1).map(|l| format!("{l}\n")).collect();
    assert!(matches!(SignalFile::parse(&truncated), Err(IoError::HeaderMismatch { expected: 100, found: 99 })));
}

#[test]
fn missing_file_is_io_error() {
    assert!(matches!(read_signal(std::path::Path::new("/nonexistent/x.csv")), Err(IoError::Io { .. })));
}
