use swd_core::datagen::{gen_background, gen_corpus, gen_swd, gen_swd_with_burst, GenConfig};
use swd_core::filter::FilterConfig;
use swd_core::ma::{moving_average, MaConfig};
use swd_core::pipeline::extract_signal;
use swd_core::signal::Label;

#[test]
fn swd_sigma_exceeds_paired_background() {
    let cfg = GenConfig::default();
    let (ma, filter) = (MaConfig::default(), FilterConfig::default());
    let wins = (0..500u64)
        .filter(|&i| {
            let swd = extract_signal(&gen_swd(&cfg, i).unwrap(), ma, &filter).unwrap();
            let bg = extract_signal(&gen_background(&cfg, i).unwrap(), ma, &filter).unwrap();
            swd.post.sigma > bg.post.sigma
        })
        .count();
    assert!(wins >= 475, "{wins}/500");
}

#[test]
fn burst_rhythm_near_three_hertz() {
    let cfg = GenConfig {
        background_amp_uv: 1.0,
        drift_amp_uv: 0.0,
        artifact_prob: 0.0,
        ..GenConfig::default()
    };
    for instance in 0..20u64 {
        let (sig, burst) = gen_swd_with_burst(&cfg, instance).unwrap();
        // 25-sample smoothing flattens the spike so each cycle reads as one positive and one negative lobe
        let smooth = moving_average(&sig.samples[burst.clone()], 12).unwrap();
        let mean = smooth.iter().sum::<f64>() / smooth.len() as f64;
        let crossings = smooth
            .windows(2)
            .filter(|w| (w[0] - mean).signum() != (w[1] - mean).signum())
            .count();
        let hz = crossings as f64 / 2.0 / (smooth.len() as f64 / cfg.fs);
        assert!((hz - 3.0).abs() <= 0.5, "instance {instance}: {hz} Hz");
    }
}

#[test]
fn background_std_tracks_amplitude() {
    let cfg = GenConfig {
        duration_s: 600.0,
        drift_amp_uv: 0.0,
        artifact_prob: 0.0,
        ..GenConfig::default()
    };
    let x = gen_background(&cfg, 5).unwrap().samples;
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let sd = (x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let target = cfg.background_amp_uv;
    assert!((sd - target).abs() <= 0.3 * target, "{sd}");
}

#[test]
fn amplitudes_bounded_and_finite() {
    let cfg = GenConfig {
        n_per_class: 60,
        ..GenConfig::default()
    };
    let bound = cfg.amplitude_bound();
    for s in gen_corpus(&cfg).unwrap() {
        assert!(
            s.samples.iter().all(|v| v.is_finite() && v.abs() <= bound),
            "{}",
            s.id
        );
    }
}

#[test]
fn zero_jitter_runs_repeat_exactly() {
    let cfg = GenConfig {
        jitter: 0.0,
        artifact_prob: 0.0,
        ..GenConfig::default()
    };
    assert_eq!(gen_swd(&cfg, 9).unwrap(), gen_swd(&cfg, 9).unwrap());
    assert_eq!(
        gen_background(&cfg, 9).unwrap(),
        gen_background(&cfg, 9).unwrap()
    );
}

#[test]
fn corpus_balanced_and_identical_across_runs() {
    let cfg = GenConfig {
        n_per_class: 25,
        ..GenConfig::default()
    };
    let a = gen_corpus(&cfg).unwrap();
    assert_eq!(a.len(), 50);
    assert_eq!(a.iter().filter(|s| s.label == Some(Label::Swd)).count(), 25);
    assert_eq!(a, gen_corpus(&cfg).unwrap());
    let one = gen_corpus(&GenConfig {
        n_per_class: 1,
        ..GenConfig::default()
    })
    .unwrap();
    assert_eq!(one.len(), 2);
}
