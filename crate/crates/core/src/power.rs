//! Receiver front-end power: ADC power law, parametric analog-beamforming
//! RFFE draw (LNAs behind passive phase shifters/combiner/mixer plus LO), and
//! the duty-cycled DRX average.

use serde::{Deserialize, Serialize};

use crate::scalar::{real, Real};

/// Per-element calibration constant fitted once against the two reference
/// front ends (8 elements -> 133.7 mW, 64 elements -> 999.3 mW at the default
/// LNA figure of merit and insertion loss).
pub const RFFE_CAL_CONSTANT: f64 = 50.36481412548874;

/// Front-end power model parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerConfig<F> {
    /// ADC figure of merit, J per conversion step.
    pub adc_fom_j_per_step: F,
    pub adc_bits: u32,
    /// Number of ADCs (2 = I/Q pair).
    pub adc_count: u32,
    /// ADC sampling rate, Hz.
    pub f_s_hz: F,
    /// RFFE element count (LNA + phase-shifter branches).
    pub n_rx: usize,
    /// LNA figure of merit, 1/mW.
    pub lna_fom_per_mw: F,
    /// Passive phase-shifter/combiner/mixer insertion loss, dB.
    pub ps_insertion_loss_db: F,
    /// Local-oscillator drive, dBm.
    pub lo_power_dbm: F,
    /// Dimensionless fit constant anchoring the per-element LNA power.
    pub rffe_cal_constant: F,
}

impl<F: Real> PowerConfig<F> {
    /// 28 GHz preset: 8-element RFFE, 2 GS/s ADC pair.
    pub fn preset_28ghz() -> Self {
        Self {
            adc_fom_j_per_step: real(65e-15),
            adc_bits: 8,
            adc_count: 2,
            f_s_hz: real(2e9),
            n_rx: 8,
            lna_fom_per_mw: real(6.5),
            ps_insertion_loss_db: real(3.0),
            lo_power_dbm: real(10.0),
            rffe_cal_constant: real(RFFE_CAL_CONSTANT),
        }
    }

    /// 140 GHz preset: 64-element RFFE, 7 GS/s ADC pair.
    pub fn preset_140ghz() -> Self {
        Self {
            f_s_hz: real(7e9),
            n_rx: 64,
            ..Self::preset_28ghz()
        }
    }

    pub fn validate(&self) -> crate::error::Result<()> {
        use crate::error::Error;
        if self.adc_bits == 0 {
            return Err(Error::Config("adc_bits must be at least 1".into()));
        }
        for (v, name) in [
            (self.adc_fom_j_per_step, "adc_fom_j_per_step"),
            (self.lna_fom_per_mw, "lna_fom_per_mw"),
            (self.rffe_cal_constant, "rffe_cal_constant"),
        ] {
            if v <= F::zero() {
                return Err(Error::Config(format!("{name} must be strictly positive")));
            }
        }
        if self.f_s_hz < F::zero() {
            return Err(Error::Config("f_s_hz must be nonnegative".into()));
        }
        Ok(())
    }
}

/// ADC power, W: count * FoM * 2^bits * f_s.
pub fn adc_power_w<F: Real>(cfg: &PowerConfig<F>) -> F {
    real::<F>(cfg.adc_count as f64)
        * cfg.adc_fom_j_per_step
        * real::<F>((1u64 << cfg.adc_bits) as f64)
        * cfg.f_s_hz
}

/// Per-element LNA power, mW: cal * IL_linear / FoM.
fn lna_element_mw<F: Real>(cfg: &PowerConfig<F>) -> F {
    let il_lin = real::<F>(10.0).powf(cfg.ps_insertion_loss_db / real(10.0));
    cfg.rffe_cal_constant * il_lin / cfg.lna_fom_per_mw
}

/// RFFE power, W: n_rx LNA branches plus the LO drive. Strictly increasing
/// in the element count, strictly decreasing in the LNA figure of merit.
pub fn rffe_power_w<F: Real>(cfg: &PowerConfig<F>) -> F {
    let lo_mw = real::<F>(10.0).powf(cfg.lo_power_dbm / real(10.0));
    (real::<F>(cfg.n_rx as f64) * lna_element_mw(cfg) + lo_mw) * real(1e-3)
}

/// Whole receive front end: ADC pair plus RFFE, W.
pub fn total_rx_power_w<F: Real>(cfg: &PowerConfig<F>) -> F {
    adc_power_w(cfg) + rffe_power_w(cfg)
}

/// Duty-cycled average power, W.
pub fn mean_drx_power_w<F: Real>(beta_awake: F, cfg: &PowerConfig<F>, sleep_power_w: F) -> F {
    beta_awake * total_rx_power_w(cfg) + (F::one() - beta_awake) * sleep_power_w
}

/// Evaluate the RFFE power across a grid of LNA figures of merit.
pub fn fom_sweep<F: Real>(cfg: &PowerConfig<F>, fom_grid: &[F]) -> Vec<(F, F)> {
    fom_grid
        .iter()
        .map(|&fom| {
            let mut c = cfg.clone();
            c.lna_fom_per_mw = fom;
            (fom, rffe_power_w(&c))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn adc_anchors() {
        let p28 = adc_power_w(&PowerConfig::<f64>::preset_28ghz()) * 1e3;
        let p140 = adc_power_w(&PowerConfig::<f64>::preset_140ghz()) * 1e3;
        assert!((p28 - 66.6).abs() / 66.6 < 0.01, "28 GHz ADC {p28} mW");
        assert!((p140 - 232.9).abs() / 232.9 < 0.01, "140 GHz ADC {p140} mW");
        let mut idle = PowerConfig::<f64>::preset_28ghz();
        idle.f_s_hz = 0.0;
        assert_eq!(adc_power_w(&idle), 0.0);
    }

    #[test]
    fn adc_scaling_laws() {
        let base = PowerConfig::<f64>::preset_28ghz();
        let mut doubled = base.clone();
        doubled.f_s_hz *= 2.0;
        assert_relative_eq!(adc_power_w(&doubled), 2.0 * adc_power_w(&base));
        let mut one_more_bit = base.clone();
        one_more_bit.adc_bits += 1;
        assert_relative_eq!(adc_power_w(&one_more_bit), 2.0 * adc_power_w(&base));
    }

    #[test]
    fn rffe_and_total_anchors() {
        let p28 = PowerConfig::<f64>::preset_28ghz();
        let p140 = PowerConfig::<f64>::preset_140ghz();
        let rffe28 = rffe_power_w(&p28) * 1e3;
        let rffe140 = rffe_power_w(&p140) * 1e3;
        assert!((rffe28 - 133.7).abs() / 133.7 < 0.02, "28 GHz RFFE {rffe28} mW");
        assert!((rffe140 - 999.3).abs() / 999.3 < 0.02, "140 GHz RFFE {rffe140} mW");
        let t28 = total_rx_power_w(&p28) * 1e3;
        let t140 = total_rx_power_w(&p140) * 1e3;
        assert!((t28 - 200.3).abs() / 200.3 < 0.02, "28 GHz total {t28} mW");
        assert!((t140 - 1232.2).abs() / 1232.2 < 0.02, "140 GHz total {t140} mW");

        let mut bare = p28.clone();
        bare.n_rx = 0;
        let lo_w = 10f64.powf(10.0 / 10.0) * 1e-3;
        assert_relative_eq!(total_rx_power_w(&bare), adc_power_w(&bare) + lo_w);
    }

    #[test]
    fn fom_crossover_between_element_counts() {
        // a 64-element front end at FoM 15 draws about what an 8-element one
        // draws at FoM 2
        let mut big = PowerConfig::<f64>::preset_140ghz();
        big.lna_fom_per_mw = 15.0;
        let mut small = PowerConfig::<f64>::preset_28ghz();
        small.lna_fom_per_mw = 2.0;
        let ratio = rffe_power_w(&big) / rffe_power_w(&small);
        assert!((ratio - 1.0).abs() < 0.15, "crossover ratio {ratio}");
    }

    #[test]
    fn fom_sweep_shape() {
        let grid: Vec<f64> = (1..=60).map(|i| 0.25 * i as f64).collect();
        let small = fom_sweep(&PowerConfig::<f64>::preset_28ghz(), &grid);
        let big = fom_sweep(&PowerConfig::<f64>::preset_140ghz(), &grid);
        assert_eq!(small.len(), grid.len());
        for w in small.windows(2) {
            assert!(w[1].1 < w[0].1, "power must fall as the LNA FoM improves");
        }
        for (s, b) in small.iter().zip(&big) {
            assert!(b.1 > s.1, "64-element curve must sit above the 8-element one");
        }
    }

    #[test]
    fn monotone_in_element_count() {
        let mut cfg = PowerConfig::<f64>::preset_28ghz();
        let mut prev = 0.0;
        for n_rx in [1usize, 2, 4, 8, 16, 32, 64, 128] {
            cfg.n_rx = n_rx;
            let p = rffe_power_w(&cfg);
            assert!(p > prev);
            prev = p;
        }
    }

    #[test]
    fn duty_cycled_average() {
        let cfg = PowerConfig::<f64>::preset_140ghz();
        let total = total_rx_power_w(&cfg);
        assert_relative_eq!(mean_drx_power_w(1.0, &cfg, 0.0), total);
        assert_eq!(mean_drx_power_w(0.0, &cfg, 0.0), 0.0);
        let mean = mean_drx_power_w(0.14, &cfg, 0.0) * 1e3;
        assert!((mean - 172.5).abs() / 172.5 < 0.02, "mean draw {mean} mW");
        // a nonzero sleep floor raises the average
        assert!(mean_drx_power_w(0.14, &cfg, 0.005) > mean_drx_power_w(0.14, &cfg, 0.0));
    }
}
