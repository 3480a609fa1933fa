//! Impact events, per-splitter inertial frames, and before / non-before
//! classification.
//!
//! Each impact looks at the partner photon's progress in the rest frame of
//! its own beam-splitter. The BS11 impact is
//!
//! * `b11` when `T11 < T21`,
//! * `a11[21]` when `T21 <= T11 < T22`,
//! * `a11[22]` when `T11 >= T22`,
//!
//! all times taken in BS11's frame. Photon 2 is `b22` when `T22 < T11` in
//! BS22's frame and `T21 < T11` in BS21's frame; otherwise its final impact is
//! `a22`. Whether the BS21 impact was itself a before one (`T21 < T11` in
//! BS21's frame) is kept alongside.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};

/// Speed of light in m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Default separation below which two frame times count as a tie and the
/// schedule is refused.
pub const DEFAULT_GUARD_BAND: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Site {
    Bs11,
    Bs21,
    Bs22,
}

impl Site {
    pub const ALL: [Site; 3] = [Site::Bs11, Site::Bs21, Site::Bs22];

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Site::Bs11 => "BS11",
            Site::Bs21 => "BS21",
            Site::Bs22 => "BS22",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpacetimeEvent {
    /// Position along the optical axis, meters.
    pub x: f64,
    /// Lab-frame time, seconds.
    pub t: f64,
    pub site: Site,
}

impl SpacetimeEvent {
    pub fn new(site: Site, x: f64, t: f64) -> Result<Self> {
        ensure_finite("event position", x)?;
        ensure_finite("event time", t)?;
        Ok(Self { x, t, site })
    }
}

/// Velocity of a beam-splitter along the axis, in units of c.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FrameVelocity(f64);

impl FrameVelocity {
    pub const REST: FrameVelocity = FrameVelocity(0.0);

    pub fn new(beta: f64) -> Result<Self> {
        if beta.is_finite() && beta.abs() < 1.0 {
            Ok(Self(beta))
        } else {
            Err(Error::Input(format!("|beta| must be < 1, got {beta}")))
        }
    }

    pub fn beta(self) -> f64 {
        self.0
    }

    pub fn gamma(self) -> f64 {
        1.0 / (1.0 - self.0 * self.0).sqrt()
    }
}

/// Time coordinate of `event` in a frame moving with `beta` along the axis.
pub fn boost_time(event: &SpacetimeEvent, beta: FrameVelocity) -> f64 {
    if beta.0 == 0.0 {
        return event.t;
    }
    beta.gamma() * (event.t - beta.0 * event.x / SPEED_OF_LIGHT)
}

/// Like [`boost_time`] but validating a raw `beta`.
pub fn boost_time_checked(event: &SpacetimeEvent, beta: f64) -> Result<f64> {
    Ok(boost_time(event, FrameVelocity::new(beta)?))
}

/// One impact event and one frame velocity per beam-splitter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImpactSchedule {
    events: [SpacetimeEvent; 3],
    frames: [FrameVelocity; 3],
}

impl ImpactSchedule {
    /// `events` may be given in any order but must cover each site exactly once.
    pub fn new(events: [SpacetimeEvent; 3], frames: [FrameVelocity; 3]) -> Result<Self> {
        let mut ordered: [Option<SpacetimeEvent>; 3] = [None; 3];
        for e in events {
            let slot = &mut ordered[e.site.index()];
            if slot.is_some() {
                return Err(Error::Input(format!("duplicate event for {}", e.site)));
            }
            *slot = Some(e);
        }
        let events = ordered.map(|e| e.expect("three distinct sites cover all slots"));
        Ok(Self { events, frames })
    }

    pub fn at_rest(events: [SpacetimeEvent; 3]) -> Result<Self> {
        Self::new(events, [FrameVelocity::REST; 3])
    }

    pub fn event(&self, site: Site) -> &SpacetimeEvent {
        &self.events[site.index()]
    }

    pub fn frame(&self, site: Site) -> FrameVelocity {
        self.frames[site.index()]
    }

    pub fn all_at_rest(&self) -> bool {
        self.frames.iter().all(|f| f.0 == 0.0)
    }

    /// Times of `(T11, T21, T22)` in the rest frame of `observer`.
    pub fn times_in_frame_of(&self, observer: Site) -> [f64; 3] {
        let beta = self.frame(observer);
        self.events.map(|e| boost_time(&e, beta))
    }
}

/// Classification of the BS11 impact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Photon1Label {
    /// `b11`
    Before,
    /// `a11[21]`
    AfterBs21,
    /// `a11[22]`
    AfterBs22,
}

/// Classification of photon 2's relevant impact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Photon2Label {
    /// `b21`; only arises when photon 2 is detected right after BS21.
    BeforeAtBs21,
    /// `b22`
    BeforeAtBs22,
    /// `a22`
    NonBefore,
}

impl fmt::Display for Photon1Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Photon1Label::Before => "b11",
            Photon1Label::AfterBs21 => "a11[21]",
            Photon1Label::AfterBs22 => "a11[22]",
        })
    }
}

impl fmt::Display for Photon2Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Photon2Label::BeforeAtBs21 => "b21",
            Photon2Label::BeforeAtBs22 => "b22",
            Photon2Label::NonBefore => "a22",
        })
    }
}

/// The timing pairings for which a prediction rule exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pairing {
    /// `(b11, b21)`
    BeforeBefore21,
    /// `(b11, b22)`
    BeforeBefore22,
    /// `(a11[21], b21)`
    After21Before21,
    /// `(a11[22], b22)`, lab series 1 when at rest
    After22Before22,
    /// `(b11, a22)`, lab series 2 when at rest
    BeforeNonBefore,
    /// `(a11[22], a22)`
    After22NonBefore,
    /// `(a11[21], a22)`, lab series 3 when at rest
    After21NonBefore,
}

impl Pairing {
    pub const ALL: [Pairing; 7] = [
        Pairing::BeforeBefore21,
        Pairing::BeforeBefore22,
        Pairing::After21Before21,
        Pairing::After22Before22,
        Pairing::BeforeNonBefore,
        Pairing::After22NonBefore,
        Pairing::After21NonBefore,
    ];

    pub fn from_labels(p1: Photon1Label, p2: Photon2Label) -> Result<Self> {
        use Photon1Label as L1;
        use Photon2Label as L2;
        Ok(match (p1, p2) {
            (L1::Before, L2::BeforeAtBs21) => Pairing::BeforeBefore21,
            (L1::Before, L2::BeforeAtBs22) => Pairing::BeforeBefore22,
            (L1::AfterBs21, L2::BeforeAtBs21) => Pairing::After21Before21,
            (L1::AfterBs22, L2::BeforeAtBs22) => Pairing::After22Before22,
            (L1::Before, L2::NonBefore) => Pairing::BeforeNonBefore,
            (L1::AfterBs22, L2::NonBefore) => Pairing::After22NonBefore,
            (L1::AfterBs21, L2::NonBefore) => Pairing::After21NonBefore,
            (a, b) => return Err(Error::Unrepresentable(a.to_string(), b.to_string())),
        })
    }

    pub fn labels(self) -> (Photon1Label, Photon2Label) {
        use Photon1Label as L1;
        use Photon2Label as L2;
        match self {
            Pairing::BeforeBefore21 => (L1::Before, L2::BeforeAtBs21),
            Pairing::BeforeBefore22 => (L1::Before, L2::BeforeAtBs22),
            Pairing::After21Before21 => (L1::AfterBs21, L2::BeforeAtBs21),
            Pairing::After22Before22 => (L1::AfterBs22, L2::BeforeAtBs22),
            Pairing::BeforeNonBefore => (L1::Before, L2::NonBefore),
            Pairing::After22NonBefore => (L1::AfterBs22, L2::NonBefore),
            Pairing::After21NonBefore => (L1::AfterBs21, L2::NonBefore),
        }
    }

    /// Lab time series realized by this pairing when every splitter is at rest.
    pub fn rest_series(self) -> Option<u8> {
        match self {
            Pairing::After22Before22 => Some(1),
            Pairing::BeforeNonBefore => Some(2),
            Pairing::After21NonBefore => Some(3),
            _ => None,
        }
    }

    /// Whether both relevant impacts are non-before.
    pub fn is_two_non_before(self) -> bool {
        matches!(self, Pairing::After22NonBefore | Pairing::After21NonBefore)
    }
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.labels();
        write!(f, "({a}, {b})")
    }
}

impl std::str::FromStr for Pairing {
    type Err = Error;

    /// Accepts the display form, e.g. `(a11[21], a22)` or `a11[21],a22`.
    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '(' && *c != ')')
            .collect();
        Pairing::ALL
            .into_iter()
            .find(|p| {
                let (a, b) = p.labels();
                format!("{a},{b}") == key
            })
            .ok_or_else(|| Error::Input(format!("unknown timing pairing `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimingAssignment {
    pub pairing: Pairing,
    /// Whether the BS21 impact is a before one in BS21's frame.
    pub bs21_before: bool,
    /// Lab series 1, 2 or 3, when every splitter is at rest.
    pub series: Option<u8>,
}

impl TimingAssignment {
    /// Assignment for an explicitly chosen pairing (no geometry behind it).
    pub fn from_pairing(pairing: Pairing) -> Self {
        Self {
            pairing,
            bs21_before: matches!(
                pairing.labels().1,
                Photon2Label::BeforeAtBs21 | Photon2Label::BeforeAtBs22
            ),
            series: None,
        }
    }

    pub fn photon1(&self) -> Photon1Label {
        self.pairing.labels().0
    }

    pub fn photon2(&self) -> Photon2Label {
        self.pairing.labels().1
    }
}

fn check_gap(a: f64, b: f64, guard: f64, what: &str, frame: Site) -> Result<()> {
    if (a - b).abs() < guard {
        Err(Error::Ambiguous(format!(
            "{what} are within {guard:e} s in the frame of {frame}"
        )))
    } else {
        Ok(())
    }
}

/// Per-photon labels of one schedule, before pairing them up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImpactLabels {
    pub photon1: Photon1Label,
    pub photon2: Photon2Label,
    pub bs21_before: bool,
}

/// Labels both photons' impacts. Any compared pair of frame times closer
/// than `guard` seconds is refused as ambiguous; with `guard = 0` exact ties
/// fall on the non-before side.
pub fn impact_labels(schedule: &ImpactSchedule, guard: f64) -> Result<ImpactLabels> {
    if guard.is_nan() || guard < 0.0 {
        return Err(Error::Input(format!("guard band must be >= 0, got {guard}")));
    }
    for site in Site::ALL {
        let [_, t21, t22] = schedule.times_in_frame_of(site);
        if t22 <= t21 {
            return Err(Error::Input(format!(
                "photon 2 reaches BS22 before BS21 in the frame of {site}"
            )));
        }
    }

    let [t11, t21, t22] = schedule.times_in_frame_of(Site::Bs11);
    check_gap(t11, t21, guard, "T11 and T21", Site::Bs11)?;
    check_gap(t11, t22, guard, "T11 and T22", Site::Bs11)?;
    let photon1 = if t11 < t21 {
        Photon1Label::Before
    } else if t11 < t22 {
        Photon1Label::AfterBs21
    } else {
        Photon1Label::AfterBs22
    };

    let [t11_21, t21_21, _] = schedule.times_in_frame_of(Site::Bs21);
    check_gap(t11_21, t21_21, guard, "T11 and T21", Site::Bs21)?;
    let bs21_before = t21_21 < t11_21;

    let [t11_22, _, t22_22] = schedule.times_in_frame_of(Site::Bs22);
    check_gap(t11_22, t22_22, guard, "T11 and T22", Site::Bs22)?;
    let photon2 = if t22_22 < t11_22 && bs21_before {
        Photon2Label::BeforeAtBs22
    } else {
        Photon2Label::NonBefore
    };

    Ok(ImpactLabels {
        photon1,
        photon2,
        bs21_before,
    })
}

/// Classifies with the [`DEFAULT_GUARD_BAND`].
pub fn classify(schedule: &ImpactSchedule) -> Result<TimingAssignment> {
    classify_with_guard(schedule, DEFAULT_GUARD_BAND)
}

/// Labels the schedule and pairs the labels. `(a11[21], b22)`, reachable
/// only with moving splitters, has no prediction rule and is refused.
pub fn classify_with_guard(schedule: &ImpactSchedule, guard: f64) -> Result<TimingAssignment> {
    let labels = impact_labels(schedule, guard)?;
    let pairing = Pairing::from_labels(labels.photon1, labels.photon2)?;
    let series = if schedule.all_at_rest() {
        pairing.rest_series()
    } else {
        None
    };
    Ok(TimingAssignment {
        pairing,
        bs21_before: labels.bs21_before,
        series,
    })
}

/// Source-to-splitter layout along one axis. Photon 1 travels towards
/// negative x, photon 2 towards positive x.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentGeometry {
    /// Distance source to BS11, meters.
    pub l11: f64,
    /// Distance source to BS21, meters.
    pub l21: f64,
    /// Distance source to BS22, meters; photon 2 passes BS21 first.
    pub l22: f64,
    /// Extra optical path added by moving mirror M11, meters. Delays the
    /// BS11 impact without moving the splitter.
    pub m11_shift: f64,
    pub frames: [FrameVelocity; 3],
}

impl ExperimentGeometry {
    pub fn at_rest(l11: f64, l21: f64, l22: f64, m11_shift: f64) -> Self {
        Self {
            l11,
            l21,
            l22,
            m11_shift,
            frames: [FrameVelocity::REST; 3],
        }
    }
}

pub fn schedule_from_geometry(g: &ExperimentGeometry) -> Result<ImpactSchedule> {
    for (name, v) in [
        ("l11", g.l11),
        ("l21", g.l21),
        ("l22", g.l22),
        ("m11_shift", g.m11_shift),
    ] {
        ensure_finite(name, v)?;
    }
    if g.l11 <= 0.0 || g.l21 <= 0.0 || g.l22 <= 0.0 {
        return Err(Error::Input("path lengths must be positive".into()));
    }
    let path11 = g.l11 + g.m11_shift;
    if path11 <= 0.0 {
        return Err(Error::Input("optical path to BS11 must be positive".into()));
    }
    if g.l22 <= g.l21 {
        return Err(Error::Input("BS22 must lie beyond BS21 on photon 2's path".into()));
    }
    let c = SPEED_OF_LIGHT;
    ImpactSchedule::new(
        [
            SpacetimeEvent::new(Site::Bs11, -g.l11, path11 / c)?,
            SpacetimeEvent::new(Site::Bs21, g.l21, g.l21 / c)?,
            SpacetimeEvent::new(Site::Bs22, g.l22, g.l22 / c)?,
        ],
        g.frames,
    )
}

/// Resting geometry for lab series `n`: BS21 at 10 ns, BS22 at 20 ns, and
/// the BS11 impact moved by M11 to 25 ns (series 1), 5 ns (series 2) or
/// 15 ns (series 3).
pub fn series_preset(n: u8) -> Result<ExperimentGeometry> {
    let ns = SPEED_OF_LIGHT * 1e-9;
    let base = 10.0 * ns;
    let shift = match n {
        1 => 15.0 * ns,
        2 => -5.0 * ns,
        3 => 5.0 * ns,
        other => return Err(Error::Input(format!("series must be 1, 2 or 3, got {other}"))),
    };
    Ok(ExperimentGeometry::at_rest(base, base, 2.0 * base, shift))
}
