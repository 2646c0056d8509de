//! Blocker population (Poisson drop, Markovian mobility) and per-link
//! blockage loss from double knife-edge diffraction over vertical
//! rectangular screens.
//!
//! Loss model: for each screen the four edges contribute
//! `F = atan(+/- (pi/2) * sqrt((pi/lambda) * (D1 + D2 - d))) / pi`,
//! plus sign when the direct ray's crossing point lies on the screen side of
//! that edge, minus otherwise. Side edges are evaluated in the top view,
//! top/bottom edges in the side view, and the screen loss is
//! `-20 log10(1 - (F_h1 + F_h2)(F_w1 + F_w2))`, floored at 0 dB. Losses of
//! multiple screens add in dB. Screens are grounded, face the link normal,
//! and only screens whose plane separates Tx from Rx contribute.

use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::geometry::{point_segment_distance, Point2, Point3};
use crate::scalar::{real, Real};
use crate::scenario::ScenarioConfig;

/// Blocker class; fixes the screen dimensions and the initial speed range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockerClass {
    Human,
    Vehicular,
}

impl BlockerClass {
    /// Screen (width, height) in meters.
    pub fn dimensions<F: Real>(self) -> (F, F) {
        match self {
            BlockerClass::Human => (real(0.3), real(1.7)),
            BlockerClass::Vehicular => (real(4.8), real(1.4)),
        }
    }

    /// Upper end of the uniform initial speed range, m/s.
    pub fn max_initial_speed<F: Real>(self) -> F {
        match self {
            BlockerClass::Human => real(1.0),
            BlockerClass::Vehicular => real(28.0),
        }
    }
}

/// A moving vertical rectangular screen, grounded at z = 0 and centred
/// laterally at `position_xy`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Blocker<F> {
    pub position_xy: Point2<F>,
    pub velocity_xy: Point2<F>,
    pub width_m: F,
    pub height_m: F,
    pub class: BlockerClass,
}

impl<F: Real> Blocker<F> {
    pub fn new(class: BlockerClass, position_xy: Point2<F>, velocity_xy: Point2<F>) -> Self {
        let (width_m, height_m) = class.dimensions();
        Self {
            position_xy,
            velocity_xy,
            width_m,
            height_m,
            class,
        }
    }
}

/// The full blocker population of one trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockerField<F> {
    pub blockers: Vec<Blocker<F>>,
    /// Sampling period Delta, s.
    pub step_s: F,
}

impl<F: Real> BlockerField<F> {
    /// Poisson drop over the disc of `blocker_disc_radius_m` centred at the
    /// UE, classes equiprobable, speeds uniform in the class range with a
    /// uniform heading.
    pub fn init<R: Rng>(cfg: &ScenarioConfig<F>, ue_xy: Point2<F>, rng: &mut R) -> Self {
        let radius = cfg.blocker_disc_radius_m.to_f64().unwrap();
        let mean = cfg.blocker_density_per_m2.to_f64().unwrap() * std::f64::consts::PI * radius * radius;
        let count = if mean > 0.0 {
            Poisson::new(mean).expect("positive Poisson mean").sample(rng) as usize
        } else {
            0
        };
        let mut blockers = Vec::with_capacity(count);
        for _ in 0..count {
            let r = radius * rng.gen::<f64>().sqrt();
            let theta = rng.gen::<f64>() * std::f64::consts::TAU;
            let position = Point2::new(
                ue_xy.x + real::<F>(r * theta.cos()),
                ue_xy.y + real::<F>(r * theta.sin()),
            );
            let class = if rng.gen_bool(0.5) {
                BlockerClass::Human
            } else {
                BlockerClass::Vehicular
            };
            let speed = rng.gen::<f64>() * class.max_initial_speed::<f64>();
            let heading = rng.gen::<f64>() * std::f64::consts::TAU;
            let velocity = Point2::new(
                real::<F>(speed * heading.cos()),
                real::<F>(speed * heading.sin()),
            );
            blockers.push(Blocker::new(class, position, velocity));
        }
        Self {
            blockers,
            step_s: cfg.t_ss_per_s,
        }
    }

    /// One mobility step: velocity first (standard 2-D Gaussian increment),
    /// then position by the updated velocity times Delta.
    pub fn step<R: Rng>(&mut self, rng: &mut R) {
        for blocker in &mut self.blockers {
            let wx: f64 = StandardNormal.sample(rng);
            let wy: f64 = StandardNormal.sample(rng);
            Self::advance(blocker, real(wx), real(wy), self.step_s);
        }
    }

    fn advance(blocker: &mut Blocker<F>, wx: F, wy: F, dt: F) {
        blocker.velocity_xy.x += wx;
        blocker.velocity_xy.y += wy;
        blocker.position_xy.x += blocker.velocity_xy.x * dt;
        blocker.position_xy.y += blocker.velocity_xy.y * dt;
    }
}

#[inline]
fn fresnel_term<F: Real>(delta: F, pi_over_lambda: F, shadowed: bool) -> F {
    let pi = real::<F>(std::f64::consts::PI);
    let half_pi = pi / real(2.0);
    let mut arg = half_pi * (delta.max(F::zero()) * pi_over_lambda).sqrt();
    if !shadowed {
        arg = -arg;
    }
    arg.atan() / pi
}

#[inline]
fn dist2<F: Real>(dx: F, dy: F) -> F {
    (dx * dx + dy * dy).sqrt()
}

/// Link-constant geometry, hoisted out of the per-blocker loop.
struct LinkFrame<F> {
    t2: Point2<F>,
    r2: Point2<F>,
    /// Horizontal unit vector along the link.
    u: Point2<F>,
    /// Lateral unit vector (screen plane direction).
    v: Point2<F>,
    d2d: F,
    /// Full Tx-Rx distance in the side-view plane.
    r_side: F,
    tz: F,
    rz: F,
    pi_over_lambda: F,
}

impl<F: Real> LinkFrame<F> {
    fn new(tx: Point3<F>, rx: Point3<F>, wavelength_m: F) -> Option<Self> {
        let t2 = tx.xy();
        let r2 = rx.xy();
        let link = r2 - t2;
        let d2d = dist2(link.x, link.y);
        if d2d < real(1e-12) {
            // vertical link: the screen orientation is undefined
            return None;
        }
        let u = link.scale(F::one() / d2d);
        Some(Self {
            t2,
            r2,
            u,
            v: u.perp(),
            d2d,
            r_side: dist2(d2d, rx.z - tx.z),
            tz: tx.z,
            rz: rx.z,
            pi_over_lambda: real::<F>(std::f64::consts::PI) / wavelength_m,
        })
    }

    fn screen_loss_db(&self, blocker: &Blocker<F>) -> F {
        let a_c = (blocker.position_xy - self.t2).dot(self.u);
        let t = a_c / self.d2d;
        if t < F::zero() || t > F::one() {
            return F::zero();
        }
        let crossing = self.t2 + (self.r2 - self.t2).scale(t);
        let s_c = (crossing - blocker.position_xy).dot(self.v);
        let z_c = self.tz + (self.rz - self.tz) * t;

        let half_w = blocker.width_m / real(2.0);

        // side edges, top view
        let mut fw = F::zero();
        for (s_edge, shadowed) in [(-half_w, s_c > -half_w), (half_w, s_c < half_w)] {
            let ex = blocker.position_xy.x + self.v.x * s_edge;
            let ey = blocker.position_xy.y + self.v.y * s_edge;
            let d1 = dist2(ex - self.t2.x, ey - self.t2.y);
            let d2 = dist2(self.r2.x - ex, self.r2.y - ey);
            fw += fresnel_term(d1 + d2 - self.d2d, self.pi_over_lambda, shadowed);
        }

        // top/bottom edges, side view
        let mut fh = F::zero();
        for (z_edge, shadowed) in [
            (blocker.height_m, z_c < blocker.height_m),
            (F::zero(), z_c > F::zero()),
        ] {
            let d1 = dist2(a_c, z_edge - self.tz);
            let d2 = dist2(self.d2d - a_c, self.rz - z_edge);
            fh += fresnel_term(d1 + d2 - self.r_side, self.pi_over_lambda, shadowed);
        }

        let inner = F::one() - fh * fw;
        if inner <= F::zero() {
            return real(400.0);
        }
        let loss = -real::<F>(20.0) * inner.log10();
        loss.max(F::zero())
    }
}

/// Diffraction loss in dB (>= 0) of a single screen on the Tx-Rx link.
pub fn knife_edge_loss_db<F: Real>(
    tx: Point3<F>,
    rx: Point3<F>,
    blocker: &Blocker<F>,
    wavelength_m: F,
) -> F {
    match LinkFrame::new(tx, rx, wavelength_m) {
        Some(frame) => frame.screen_loss_db(blocker),
        None => F::zero(),
    }
}

/// dB sum of the per-blocker losses, optionally restricted to blockers
/// within `relevance_radius_m` of the 2-D link segment.
pub fn total_blockage_loss_db<F: Real>(
    tx: Point3<F>,
    rx: Point3<F>,
    field: &BlockerField<F>,
    wavelength_m: F,
    relevance_radius_m: Option<F>,
) -> F {
    let frame = match LinkFrame::new(tx, rx, wavelength_m) {
        Some(frame) => frame,
        None => return F::zero(),
    };
    let mut total = F::zero();
    for blocker in &field.blockers {
        if let Some(radius) = relevance_radius_m {
            if point_segment_distance(blocker.position_xy, frame.t2, frame.r2) > radius {
                continue;
            }
        }
        total += frame.screen_loss_db(blocker);
    }
    total
}
