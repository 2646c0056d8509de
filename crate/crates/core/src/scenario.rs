//! Static simulation world: configuration, BS grid and UE drop.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point3;
use crate::scalar::{real, speed_of_light, Real};

/// Full scenario configuration. Field names double as the flat keys of the
/// TOML config files, SI units throughout.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "F: serde::Serialize",
    deserialize = "F: Real + serde::Deserialize<'de>"
))]
pub struct ScenarioConfig<F> {
    /// Carrier frequency, Hz.
    pub carrier_freq_hz: F,
    /// Signal bandwidth, Hz.
    pub bandwidth_hz: F,
    /// Number of cells N (must be a perfect square).
    pub n_cells: usize,
    /// Side of the square deployment area, m.
    pub cell_grid_side_m: F,
    pub bs_height_m: F,
    pub ue_height_m: F,
    /// UE antenna count M_u.
    pub m_ue: usize,
    /// BS antenna count M_b.
    pub m_bs: usize,
    pub tx_power_dbm: F,
    pub temperature_k: F,
    pub noise_figure_db: F,
    /// Detection threshold gamma_min, dB.
    pub gamma_min_db: F,
    /// Monitoring period T_SS,per, s.
    pub t_ss_per_s: F,
    /// Per-cell monitoring time T_SS,0, s.
    pub t_ss0_s: F,
    /// Beam-sweep length L, full cycles.
    pub sweep_len_cycles: u32,
    /// Listening-set size K.
    pub k_listen: usize,
    /// Blocker intensity lambda_b, 1/m^2.
    pub blocker_density_per_m2: F,
    /// Radius of the blocker disc around the UE, m.
    pub blocker_disc_radius_m: F,
    pub n_trajectories: usize,
    /// Monitoring instances per trajectory.
    pub n_steps: usize,
    pub rng_seed: u64,
    /// Per-trajectory lognormal shadow fading (off by default).
    #[serde(default)]
    pub shadow_fading: bool,
    #[serde(default = "default_shadow_sigma_los")]
    pub shadow_sigma_los_db: F,
    #[serde(default = "default_shadow_sigma_nlos")]
    pub shadow_sigma_nlos_db: F,
}

fn default_shadow_sigma_los<F: Real>() -> F {
    real(4.0)
}

fn default_shadow_sigma_nlos<F: Real>() -> F {
    real(7.82)
}

impl<F: Real> ScenarioConfig<F> {
    /// 28 GHz preset (8x64 antennas, 2 GHz ADC band).
    pub fn band_28ghz() -> Self {
        Self {
            carrier_freq_hz: real(2.8e10),
            bandwidth_hz: real(4.0e8),
            n_cells: 9,
            cell_grid_side_m: real(200.0),
            bs_height_m: real(10.0),
            ue_height_m: real(1.8),
            m_ue: 8,
            m_bs: 64,
            tx_power_dbm: real(23.0),
            temperature_k: real(298.0),
            noise_figure_db: real(7.0),
            gamma_min_db: real(-6.5),
            t_ss_per_s: real(0.020),
            t_ss0_s: real(7.0e-4),
            sweep_len_cycles: 1,
            k_listen: 4,
            blocker_density_per_m2: real(0.01),
            blocker_disc_radius_m: real(200.0),
            n_trajectories: 100,
            n_steps: 500,
            rng_seed: 1,
            shadow_fading: false,
            shadow_sigma_los_db: default_shadow_sigma_los(),
            shadow_sigma_nlos_db: default_shadow_sigma_nlos(),
        }
    }

    /// 140 GHz preset (64x256 antennas, 7 GHz ADC band).
    pub fn band_140ghz() -> Self {
        Self {
            carrier_freq_hz: real(1.4e11),
            m_ue: 64,
            m_bs: 256,
            ..Self::band_28ghz()
        }
    }

    /// Carrier wavelength, m.
    pub fn wavelength_m(&self) -> F {
        speed_of_light::<F>() / self.carrier_freq_hz
    }

    pub fn validate(&self) -> Result<()> {
        fn positive<F: Real>(v: F, name: &str) -> Result<()> {
            if v > F::zero() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be strictly positive, got {v}")))
            }
        }
        positive(self.carrier_freq_hz, "carrier_freq_hz")?;
        positive(self.bandwidth_hz, "bandwidth_hz")?;
        positive(self.cell_grid_side_m, "cell_grid_side_m")?;
        positive(self.bs_height_m, "bs_height_m")?;
        positive(self.ue_height_m, "ue_height_m")?;
        positive(self.temperature_k, "temperature_k")?;
        positive(self.t_ss_per_s, "t_ss_per_s")?;
        positive(self.t_ss0_s, "t_ss0_s")?;
        positive(self.blocker_disc_radius_m, "blocker_disc_radius_m")?;
        if self.blocker_density_per_m2 < F::zero() {
            return Err(Error::Config(format!(
                "blocker_density_per_m2 must be nonnegative, got {}",
                self.blocker_density_per_m2
            )));
        }
        if self.n_cells == 0 {
            return Err(Error::Config("n_cells must be at least 1".into()));
        }
        if self.m_ue == 0 || self.m_bs == 0 {
            return Err(Error::Config("antenna counts must be at least 1".into()));
        }
        if self.k_listen == 0 || self.k_listen > self.n_cells {
            return Err(Error::Config(format!(
                "k_listen must satisfy 1 <= K <= N, got K={} with N={}",
                self.k_listen, self.n_cells
            )));
        }
        if self.sweep_len_cycles == 0 {
            return Err(Error::Config("sweep_len_cycles must be at least 1".into()));
        }
        let n = real::<F>(self.n_cells as f64);
        if self.t_ss0_s * n > self.t_ss_per_s {
            return Err(Error::Config(format!(
                "per-cell monitor time too long: t_ss0_s * n_cells = {} exceeds t_ss_per_s = {}",
                self.t_ss0_s * n,
                self.t_ss_per_s
            )));
        }
        if self.n_trajectories == 0 || self.n_steps == 0 {
            return Err(Error::Config(
                "n_trajectories and n_steps must be at least 1".into(),
            ));
        }
        grid_dim(self.n_cells)?;
        Ok(())
    }
}

fn grid_dim(n_cells: usize) -> Result<usize> {
    let m = (n_cells as f64).sqrt().round() as usize;
    if m * m == n_cells {
        Ok(m)
    } else {
        Err(Error::Config(format!(
            "n_cells = {n_cells} is not a perfect square; the BS grid is undefined"
        )))
    }
}

/// BS grid plus the UE drop.
#[derive(Clone, Debug, PartialEq)]
pub struct Deployment<F> {
    pub bs_positions: Vec<Point3<F>>,
    pub ue_position: Point3<F>,
}

/// Place N BSs on a regular sqrt(N) x sqrt(N) grid spanning the square
/// centred at the origin and drop the UE uniformly inside the square.
pub fn build_deployment<F: Real, R: Rng>(
    cfg: &ScenarioConfig<F>,
    rng: &mut R,
) -> Result<Deployment<F>> {
    cfg.validate()?;
    let m = grid_dim(cfg.n_cells)?;
    let half = cfg.cell_grid_side_m / real(2.0);
    let mut bs_positions = Vec::with_capacity(cfg.n_cells);
    for iy in 0..m {
        for ix in 0..m {
            let frac = |i: usize| -> F {
                if m == 1 {
                    real(0.5)
                } else {
                    real(i as f64 / (m - 1) as f64)
                }
            };
            let x = -half + cfg.cell_grid_side_m * frac(ix);
            let y = -half + cfg.cell_grid_side_m * frac(iy);
            bs_positions.push(Point3::new(x, y, cfg.bs_height_m));
        }
    }
    let side = cfg.cell_grid_side_m.to_f64().unwrap();
    let ue_x = real::<F>(rng.gen_range(-side / 2.0..=side / 2.0));
    let ue_y = real::<F>(rng.gen_range(-side / 2.0..=side / 2.0));
    Ok(Deployment {
        bs_positions,
        ue_position: Point3::new(ue_x, ue_y, cfg.ue_height_m),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg() -> ScenarioConfig<f64> {
        ScenarioConfig::band_28ghz()
    }

    #[test]
    fn grid_is_3x3_with_100m_spacing() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let dep = build_deployment(&cfg(), &mut rng).unwrap();
        assert_eq!(dep.bs_positions.len(), 9);
        let mut xs: Vec<f64> = dep.bs_positions.iter().map(|p| p.x).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        xs.dedup();
        assert_eq!(xs, vec![-100.0, 0.0, 100.0]);
        let mut ys: Vec<f64> = dep.bs_positions.iter().map(|p| p.y).collect();
        ys.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ys.dedup();
        assert_eq!(ys, vec![-100.0, 0.0, 100.0]);
        for p in &dep.bs_positions {
            assert_eq!(p.z, 10.0);
        }
        assert_eq!(dep.ue_position.z, 1.8);
        assert!(dep.ue_position.x.abs() <= 100.0 && dep.ue_position.y.abs() <= 100.0);
    }

    #[test]
    fn single_cell_sits_at_center() {
        let mut c = cfg();
        c.n_cells = 1;
        c.k_listen = 1;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let dep = build_deployment(&c, &mut rng).unwrap();
        assert_eq!(dep.bs_positions.len(), 1);
        assert_eq!(dep.bs_positions[0].x, 0.0);
        assert_eq!(dep.bs_positions[0].y, 0.0);
    }

    #[test]
    fn same_seed_same_deployment() {
        let a = build_deployment(&cfg(), &mut ChaCha8Rng::seed_from_u64(99)).unwrap();
        let b = build_deployment(&cfg(), &mut ChaCha8Rng::seed_from_u64(99)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn non_square_cell_count_rejected() {
        let mut c = cfg();
        c.n_cells = 8;
        let err = build_deployment(&c, &mut ChaCha8Rng::seed_from_u64(0)).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn invalid_k_and_monitor_budget_rejected() {
        let mut c = cfg();
        c.k_listen = 10;
        assert!(c.validate().is_err());
        let mut c = cfg();
        c.t_ss0_s = 3.0e-3; // 9 * 3 ms > 20 ms
        assert!(c.validate().is_err());
        let mut c = cfg();
        c.sweep_len_cycles = 0;
        assert!(c.validate().is_err());
        let mut c = cfg();
        c.carrier_freq_hz = 0.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn ue_drop_is_uniform_over_the_square() {
        // Mean of the drop over many seeds should sit near the centre.
        let c = cfg();
        let n = 10_000;
        let (mut sx, mut sy) = (0.0, 0.0);
        for seed in 0..n {
            let dep = build_deployment(&c, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            sx += dep.ue_position.x;
            sy += dep.ue_position.y;
        }
        let (mx, my) = (sx / n as f64, sy / n as f64);
        assert!(mx.abs() < 5.0, "mean x drifted: {mx}");
        assert!(my.abs() < 5.0, "mean y drifted: {my}");
    }

    #[test]
    fn generic_scalar_builds_f32() {
        let c = ScenarioConfig::<f32>::band_140ghz();
        let dep = build_deployment(&c, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(dep.bs_positions.len(), 9);
        assert!((c.wavelength_m() - 0.00214137f32).abs() < 1e-7);
    }
}
