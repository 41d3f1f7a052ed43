//! FMCW range-measurement simulation.
//!
//! The chain mirrors a single-chirp FMCW receiver: mixing the transmitted
//! and received chirps leaves a real beat tone whose frequency `k·t_d`
//! encodes the round-trip delay; a DFT turns each target into a spectral
//! peak, a cell-averaging CFAR detector picks peaks against the local noise
//! floor, and the bin index maps back to range as `r = c·m/(2B)`.
//!
//! The beat signal is modeled as a *real* mixer output. Its negative-
//! frequency image leaks a small phase-dependent term into the spectrum, so
//! for fractional bin offsets within ~0.01 of an exact half bin the argmax
//! can land on the farther of the two straddling bins; everywhere else the
//! noiseless bin error is at most half a bin (`c/(4B)`).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rustfft::{num_complex::Complex, FftPlanner};
use thiserror::Error;

use crate::geometry::{range_resolution, SPEED_OF_LIGHT};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SignalError {
    /// Target beat frequency at or beyond Nyquist.
    #[error("range {range_m} m aliases: maximum unambiguous range is {max_range_m} m")]
    RangeAliased { range_m: f64, max_range_m: f64 },
    /// CFAR window does not fit in the spectrum.
    #[error("CFAR window needs {needed} cells but the spectrum has {len}")]
    WindowTooLarge { needed: usize, len: usize },
    /// CFAR returned no detections.
    #[error("no detection above the CFAR threshold")]
    NoDetection,
}

/// FMCW waveform parameters for one chirp.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChirpConfig {
    /// Sweep bandwidth B (Hz).
    pub bandwidth_hz: f64,
    /// Chirp duration τ (s).
    pub duration_s: f64,
    /// Samples per chirp M (power of two, >= 16).
    pub n_samples: usize,
    /// Carrier (sweep start) frequency f_c (Hz).
    pub carrier_hz: f64,
}

impl Default for ChirpConfig {
    /// 1 GHz sweep over 25.6 µs sampled 256 times (f_s = 10 MHz) at 60 GHz.
    fn default() -> Self {
        Self {
            bandwidth_hz: 1e9,
            duration_s: 25.6e-6,
            n_samples: 256,
            carrier_hz: 60e9,
        }
    }
}

impl ChirpConfig {
    /// Implied sample rate f_s = M/τ (Hz).
    pub fn sample_rate(&self) -> f64 {
        self.n_samples as f64 / self.duration_s
    }

    /// Chirp slope k = B/τ (Hz/s).
    pub fn slope(&self) -> f64 {
        self.bandwidth_hz / self.duration_s
    }

    /// Largest target range whose beat tone stays below Nyquist: c·M/(4B).
    pub fn max_unambiguous_range(&self) -> f64 {
        SPEED_OF_LIGHT * self.n_samples as f64 / (4.0 * self.bandwidth_hz)
    }

    /// One range bin, c/(2B) (m).
    pub fn range_bin_width(&self) -> f64 {
        range_resolution(self.bandwidth_hz)
    }

    fn assert_valid(&self) {
        assert!(
            self.bandwidth_hz > 0.0 && self.duration_s > 0.0 && self.carrier_hz > 0.0,
            "chirp parameters must be positive"
        );
        assert!(
            self.n_samples >= 16 && self.n_samples.is_power_of_two(),
            "n_samples must be a power of two >= 16, got {}",
            self.n_samples
        );
    }
}

/// Real beat signal of one chirp.
#[derive(Debug, Clone, PartialEq)]
pub struct BeatSignal {
    pub samples: Vec<f64>,
    pub config: ChirpConfig,
}

/// One-sided power spectrum of a beat signal.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeSpectrum {
    /// |X[m]|² for m = 0..=M_fft/2.
    pub magnitude_sq: Vec<f64>,
    /// Range per bin (m): c/(2B) divided by the zero-pad factor.
    pub bin_width_m: f64,
}

impl RangeSpectrum {
    /// Spectral energy under the convention `Σ x[n]² = (1/M)·(|X[0]|² +
    /// 2·Σ_mid |X[m]|² + |X[M/2]|²)`; equals the time-domain energy of the
    /// (windowed, zero-padded) samples.
    pub fn energy(&self) -> f64 {
        let n = self.magnitude_sq.len();
        let m_fft = 2 * (n - 1);
        let mut acc = self.magnitude_sq[0] + self.magnitude_sq[n - 1];
        for &p in &self.magnitude_sq[1..n - 1] {
            acc += 2.0 * p;
        }
        acc / m_fft as f64
    }
}

/// Window applied before the DFT.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WindowKind {
    /// No weighting; bin mapping matches r = c·m/(2B) exactly.
    #[default]
    Rectangular,
    /// Hann weighting for sidelobe studies.
    Hann,
}

/// Spectrum options beyond the defaults.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumOptions {
    pub window: WindowKind,
    /// FFT length multiplier (1 = no zero padding). Scales bin_width_m down.
    pub zero_pad_factor: usize,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self { window: WindowKind::Rectangular, zero_pad_factor: 1 }
    }
}

/// CA-CFAR detector parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CfarConfig {
    /// One-sided training cells.
    pub n_train: usize,
    /// One-sided guard cells.
    pub n_guard: usize,
    /// Design false-alarm probability, in (0, 0.5).
    pub pfa: f64,
}

impl Default for CfarConfig {
    fn default() -> Self {
        Self { n_train: 8, n_guard: 2, pfa: 1e-4 }
    }
}

/// CFAR detection: a spectral peak above the adaptive threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detection {
    /// Range bin index m.
    pub bin: usize,
    /// Range c·m/(2B) scaled by the bin width (m).
    pub range_m: f64,
    /// |X[m]|² at the peak.
    pub power: f64,
}

/// Synthesizes the real beat signal of a set of point targets, optionally
/// with white Gaussian noise.
///
/// Each `(range, amplitude)` target contributes `(A/2)·cos(2π·k·t_d·t + φ₀)`
/// with `t_d = 2r/c` and `φ₀ = 2π·f_c·t_d`. When `snr_db` is given, the
/// noise variance is set so the strongest target's SNR (defined as `A²/8`
/// over the noise variance) equals `snr_db`; with no targets a reference
/// amplitude of 1 is used. Deterministic for a fixed seed.
pub fn synthesize_beat(
    config: &ChirpConfig,
    targets: &[(f64, f64)],
    snr_db: Option<f64>,
    seed: u64,
) -> Result<BeatSignal, SignalError> {
    config.assert_valid();
    let max_range = config.max_unambiguous_range();
    for &(range_m, amplitude) in targets {
        if !(range_m > 0.0 && range_m < max_range) {
            return Err(SignalError::RangeAliased { range_m, max_range_m: max_range });
        }
        assert!(amplitude > 0.0, "target amplitudes must be positive");
    }

    let m = config.n_samples;
    let fs = config.sample_rate();
    let k = config.slope();
    let mut samples = vec![0.0f64; m];
    for &(range_m, amplitude) in targets {
        let t_d = 2.0 * range_m / SPEED_OF_LIGHT;
        let beat_hz = k * t_d;
        let phi0 = std::f64::consts::TAU * config.carrier_hz * t_d;
        for (n, s) in samples.iter_mut().enumerate() {
            let t = n as f64 / fs;
            *s += 0.5 * amplitude * (std::f64::consts::TAU * beat_hz * t + phi0).cos();
        }
    }

    if let Some(snr_db) = snr_db {
        let ref_amplitude = targets
            .iter()
            .map(|&(_, a)| a)
            .fold(f64::NEG_INFINITY, f64::max);
        let ref_amplitude = if targets.is_empty() { 1.0 } else { ref_amplitude };
        let signal_power = ref_amplitude * ref_amplitude / 8.0;
        let noise_var = signal_power / 10f64.powf(snr_db / 10.0);
        let normal = Normal::new(0.0, noise_var.sqrt()).expect("finite noise sigma");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for s in samples.iter_mut() {
            *s += normal.sample(&mut rng);
        }
    }

    Ok(BeatSignal { samples: samples, config: *config })
}

/// One-sided power spectrum with default options (rectangular window, no
/// zero padding).
pub fn range_spectrum(signal: &BeatSignal) -> RangeSpectrum {
    range_spectrum_with(signal, SpectrumOptions::default())
}

/// One-sided power spectrum of the (windowed, optionally zero-padded)
/// samples.
pub fn range_spectrum_with(signal: &BeatSignal, options: SpectrumOptions) -> RangeSpectrum {
    assert!(options.zero_pad_factor >= 1, "zero_pad_factor must be >= 1");
    let m = signal.samples.len();
    let m_fft = m * options.zero_pad_factor;

    let mut buf: Vec<Complex<f64>> = Vec::with_capacity(m_fft);
    match options.window {
        WindowKind::Rectangular => {
            buf.extend(signal.samples.iter().map(|&x| Complex::new(x, 0.0)));
        }
        WindowKind::Hann => {
            let denom = (m - 1) as f64;
            buf.extend(signal.samples.iter().enumerate().map(|(n, &x)| {
                let w = 0.5 * (1.0 - (std::f64::consts::TAU * n as f64 / denom).cos());
                Complex::new(x * w, 0.0)
            }));
        }
    }
    buf.resize(m_fft, Complex::new(0.0, 0.0));

    FftPlanner::new().plan_fft_forward(m_fft).process(&mut buf);

    let magnitude_sq = buf[..=m_fft / 2].iter().map(|c| c.norm_sqr()).collect();
    RangeSpectrum {
        magnitude_sq,
        bin_width_m: signal.config.range_bin_width() / options.zero_pad_factor as f64,
    }
}

/// Cell-averaging CFAR over a one-sided power spectrum.
///
/// For each cell the noise estimate is the mean of up to `2·n_train`
/// training cells outside the guard band, one-sided at the spectrum edges.
/// The threshold multiplier `α = T·(pfa^(−1/T) − 1)` is recomputed from the
/// `T` training cells actually used, which keeps the per-cell false-alarm
/// probability at `pfa` for exponentially distributed noise power.
/// Detections are cells above threshold that are also local maxima
/// (plateaus resolve to their lowest bin), sorted by descending power with
/// ties broken by lowest bin.
pub fn cfar_detect(
    spectrum: &RangeSpectrum,
    cfar: &CfarConfig,
) -> Result<Vec<Detection>, SignalError> {
    assert!(cfar.n_train >= 1, "need at least one training cell per side");
    assert!(cfar.pfa > 0.0 && cfar.pfa < 0.5, "pfa must be in (0, 0.5)");
    let p = &spectrum.magnitude_sq;
    let len = p.len();
    let needed = 2 * (cfar.n_train + cfar.n_guard) + 2;
    if len <= 2 * (cfar.n_train + cfar.n_guard) + 1 {
        return Err(SignalError::WindowTooLarge { needed, len });
    }

    let mut detections = Vec::new();
    for i in 0..len {
        let mut sum = 0.0;
        let mut used = 0usize;
        let lead_hi = i.saturating_sub(cfar.n_guard);
        let lead_lo = i.saturating_sub(cfar.n_guard + cfar.n_train);
        for &cell in &p[lead_lo..lead_hi] {
            sum += cell;
            used += 1;
        }
        let lag_lo = (i + cfar.n_guard + 1).min(len);
        let lag_hi = (i + cfar.n_guard + cfar.n_train + 1).min(len);
        for &cell in &p[lag_lo..lag_hi] {
            sum += cell;
            used += 1;
        }
        debug_assert!(used >= cfar.n_train);
        let t = used as f64;
        let alpha = t * (cfar.pfa.powf(-1.0 / t) - 1.0);
        let threshold = alpha * (sum / t);

        let rises_left = i == 0 || p[i] > p[i - 1];
        let falls_right = i == len - 1 || p[i] >= p[i + 1];
        if p[i] > threshold && rises_left && falls_right {
            detections.push(Detection {
                bin: i,
                range_m: i as f64 * spectrum.bin_width_m,
                power: p[i],
            });
        }
    }

    detections.sort_by(|a, b| {
        b.power
            .partial_cmp(&a.power)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.bin.cmp(&b.bin))
    });
    Ok(detections)
}

/// Runs the full chain for a scene expected to contain one dominant target
/// and returns the strongest detection.
pub fn estimate_range(
    config: &ChirpConfig,
    targets: &[(f64, f64)],
    snr_db: Option<f64>,
    seed: u64,
    cfar: &CfarConfig,
) -> Result<Detection, SignalError> {
    let signal = synthesize_beat(config, targets, snr_db, seed)?;
    let spectrum = range_spectrum(&signal);
    let detections = cfar_detect(&spectrum, cfar)?;
    detections.into_iter().next().ok_or(SignalError::NoDetection)
}
