//! Calibration tables for the link model.
//!
//! Every number here is a measured or chosen default; all of them can be
//! overridden from the configuration file. Quality-vs-distance behavior is
//! table driven on purpose: the goal is reproducing observed link behavior at
//! desk scale, not physical path-loss modeling.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling::{capped_mean_shift, SimRng, TruncatedNormal};

/// Human-blockage scenario classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    /// Short obstruction by a person walking across the link.
    Transient,
    /// Sustained obstruction with no reflected path; the link stays degraded.
    PermanentNoNlos,
    /// Sustained obstruction with a reflected path picked up after a beam
    /// switch; quality partially recovers.
    PermanentWithNlos,
}

impl Scenario {
    pub const ALL: [Scenario; 3] = [
        Scenario::Transient,
        Scenario::PermanentNoNlos,
        Scenario::PermanentWithNlos,
    ];

    pub fn id(self) -> u8 {
        match self {
            Scenario::Transient => 1,
            Scenario::PermanentNoNlos => 2,
            Scenario::PermanentWithNlos => 3,
        }
    }

    pub fn from_id(id: u8) -> Result<Scenario> {
        match id {
            1 => Ok(Scenario::Transient),
            2 => Ok(Scenario::PermanentNoNlos),
            3 => Ok(Scenario::PermanentWithNlos),
            other => Err(Error::UnknownScenario(other)),
        }
    }

    /// Whether quality rises again after the drop.
    pub fn has_recovery(self) -> bool {
        !matches!(self, Scenario::PermanentNoNlos)
    }

    /// Default time spent at the blocked level. Walking blockers and beam
    /// switches leave the minimum almost immediately; a standing blocker
    /// holds it until something else ends the episode.
    pub fn default_dwell_ms(self) -> u64 {
        match self {
            Scenario::Transient | Scenario::PermanentWithNlos => 0,
            Scenario::PermanentNoNlos => 30_000,
        }
    }
}

/// Distances at which blockage statistics were calibrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceBucket {
    /// 3 m station-to-AP distance.
    Near3m,
    /// 7 m station-to-AP distance.
    Far7m,
}

impl DistanceBucket {
    pub const ALL: [DistanceBucket; 2] = [DistanceBucket::Near3m, DistanceBucket::Far7m];

    pub fn meters(self) -> f64 {
        match self {
            DistanceBucket::Near3m => 3.0,
            DistanceBucket::Far7m => 7.0,
        }
    }

    /// Nearest calibrated bucket for an arbitrary distance.
    pub fn nearest(distance_m: f64) -> DistanceBucket {
        if (distance_m - 3.0).abs() <= (distance_m - 7.0).abs() {
            DistanceBucket::Near3m
        } else {
            DistanceBucket::Far7m
        }
    }
}

/// Timing and magnitude statistics for one (scenario, distance) cell.
///
/// Drop/recovery times carry the measured mean and maximum; magnitudes carry
/// the cluster centers of the drop (`x_c`) and rise (`y_c`) in quality units.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EpisodeStats {
    pub drop_time_mean_ms: f64,
    pub drop_time_max_ms: f64,
    pub recovery_time_mean_ms: Option<f64>,
    pub recovery_time_max_ms: Option<f64>,
    pub drop_centroid: f64,
    pub rise_centroid: f64,
}

/// Stats for both calibrated distances of one scenario.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BucketStats {
    pub at_3m: EpisodeStats,
    pub at_7m: EpisodeStats,
}

/// Full blockage calibration table (all scenarios, both distances).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EpisodeDistributions {
    pub transient: BucketStats,
    pub permanent: BucketStats,
    pub permanent_nlos: BucketStats,
}

impl EpisodeDistributions {
    pub fn stats(&self, scenario: Scenario, bucket: DistanceBucket) -> &EpisodeStats {
        let pair = match scenario {
            Scenario::Transient => &self.transient,
            Scenario::PermanentNoNlos => &self.permanent,
            Scenario::PermanentWithNlos => &self.permanent_nlos,
        };
        match bucket {
            DistanceBucket::Near3m => &pair.at_3m,
            DistanceBucket::Far7m => &pair.at_7m,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for scenario in Scenario::ALL {
            for bucket in DistanceBucket::ALL {
                let s = self.stats(scenario, bucket);
                let ok_timing = |mean: f64, max: f64| mean > 0.0 && mean <= max;
                if !ok_timing(s.drop_time_mean_ms, s.drop_time_max_ms) {
                    return Err(Error::Config(format!(
                        "drop time for {scenario:?} at {bucket:?} must satisfy 0 < mean <= max"
                    )));
                }
                match (s.recovery_time_mean_ms, s.recovery_time_max_ms) {
                    (Some(mean), Some(max)) if ok_timing(mean, max) => {}
                    (None, None) => {}
                    _ => {
                        return Err(Error::Config(format!(
                            "recovery time for {scenario:?} at {bucket:?} must be absent or 0 < mean <= max"
                        )))
                    }
                }
                if scenario.has_recovery() != s.recovery_time_mean_ms.is_some() {
                    return Err(Error::Config(format!(
                        "recovery time entries for {scenario:?} at {bucket:?} do not match the scenario class"
                    )));
                }
                for units in [s.drop_centroid, s.rise_centroid] {
                    if !(0.0..=10.0).contains(&units) {
                        return Err(Error::Config(format!(
                            "centroid for {scenario:?} at {bucket:?} outside [0, 10]"
                        )));
                    }
                }
                if s.rise_centroid >= s.drop_centroid {
                    return Err(Error::Config(format!(
                        "rise centroid must sit below drop centroid for {scenario:?} at {bucket:?}"
                    )));
                }
            }
        }
        Ok(())
    }
}

impl Default for EpisodeDistributions {
    fn default() -> Self {
        let cell = |dm, dx, rm: Option<f64>, rx: Option<f64>, xc, yc| EpisodeStats {
            drop_time_mean_ms: dm,
            drop_time_max_ms: dx,
            recovery_time_mean_ms: rm,
            recovery_time_max_ms: rx,
            drop_centroid: xc,
            rise_centroid: yc,
        };
        EpisodeDistributions {
            transient: BucketStats {
                at_3m: cell(197.0, 838.0, Some(3826.0), Some(5726.0), 7.5, 7.32),
                at_7m: cell(140.0, 513.0, Some(1648.0), Some(2434.0), 7.72, 7.64),
            },
            permanent: BucketStats {
                at_3m: cell(232.0, 748.0, None, None, 7.20, 1.41),
                at_7m: cell(298.0, 952.0, None, None, 7.30, 1.56),
            },
            permanent_nlos: BucketStats {
                // The published 7 m maximum recovery time reads "313 s"; every
                // neighboring entry (mean 136 ms, 3 m max 376 ms) is in
                // milliseconds, so it is treated as 313 ms here.
                at_3m: cell(267.65, 707.0, Some(190.0), Some(376.0), 3.40, 1.13),
                at_7m: cell(411.0, 784.0, Some(136.0), Some(313.0), 4.06, 1.20),
            },
        }
    }
}

/// Pre-solved samplers for one (scenario, distance) cell.
#[derive(Debug, Clone, Copy)]
pub struct EpisodeSampler {
    pub drop_time: TruncatedNormal,
    pub recovery_time: Option<TruncatedNormal>,
    pub drop_centroid: f64,
    pub rise_centroid: f64,
    /// Location shift applied to rise draws to undo the bias from capping the
    /// rise at the drop magnitude.
    pub rise_shift: f64,
}

impl EpisodeSampler {
    /// Timing scale: half the mean-to-max gap; support `[mean/4, max]` keeps
    /// both published moments while bounding every draw by the observed
    /// maximum.
    fn timing(mean: f64, max: f64) -> TruncatedNormal {
        TruncatedNormal::with_mean(mean, (max - mean) / 2.0, mean / 4.0, max)
    }

    pub fn new(stats: &EpisodeStats, spread_units: f64) -> EpisodeSampler {
        EpisodeSampler {
            drop_time: Self::timing(stats.drop_time_mean_ms, stats.drop_time_max_ms),
            recovery_time: stats
                .recovery_time_mean_ms
                .zip(stats.recovery_time_max_ms)
                .map(|(mean, max)| Self::timing(mean, max)),
            drop_centroid: stats.drop_centroid,
            rise_centroid: stats.rise_centroid,
            rise_shift: capped_mean_shift(stats.rise_centroid, stats.drop_centroid, spread_units),
        }
    }
}

/// Azimuth coverage pattern of the embedded antenna array.
///
/// Consumer arrays cover roughly half the azimuth plane at full quality and
/// leak a weak back sector; the taper keeps the transition continuous.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct AntennaPattern {
    pub sector_width_deg: f64,
    pub taper_width_deg: f64,
    pub back_gain: f64,
}

impl Default for AntennaPattern {
    fn default() -> Self {
        AntennaPattern {
            sector_width_deg: 180.0,
            taper_width_deg: 20.0,
            back_gain: 0.2,
        }
    }
}

/// Quality-vs-distance curve: flat plateau to the knee, linear fall to zero
/// at the maximum range, zero beyond.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RangeCurve {
    pub plateau_q: f64,
    pub knee_m: f64,
    pub max_range_m: f64,
}

impl RangeCurve {
    pub fn quality_at(&self, distance_m: f64) -> f64 {
        if distance_m <= self.knee_m {
            self.plateau_q
        } else if distance_m >= self.max_range_m {
            0.0
        } else {
            self.plateau_q * (self.max_range_m - distance_m) / (self.max_range_m - self.knee_m)
        }
    }
}

/// Range curves with and without active data traffic.
///
/// Data transport needs higher-order modulation than beaconing alone, so the
/// usable range is shorter whenever traffic is flowing.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TrafficRanges {
    pub with_traffic: RangeCurve,
    pub without_traffic: RangeCurve,
}

/// Deployment environment of a link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Environment {
    IndoorCorridor,
    IndoorRoom,
    OutdoorOpen,
}

/// Per-environment range calibration.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct RangeTable {
    pub indoor_corridor: TrafficRanges,
    pub indoor_room: TrafficRanges,
    pub outdoor_open: TrafficRanges,
}

impl RangeTable {
    pub fn curve(&self, environment: Environment, traffic_active: bool) -> &RangeCurve {
        let pair = match environment {
            Environment::IndoorCorridor => &self.indoor_corridor,
            Environment::IndoorRoom => &self.indoor_room,
            Environment::OutdoorOpen => &self.outdoor_open,
        };
        if traffic_active {
            &pair.with_traffic
        } else {
            &pair.without_traffic
        }
    }
}

impl Default for RangeTable {
    fn default() -> Self {
        let curve = |knee: f64, max: f64| RangeCurve {
            plateau_q: 9.0,
            knee_m: knee,
            max_range_m: max,
        };
        // Corridor walls reinforce the direct path, so corridors reach the
        // farthest; open outdoor space reaches the least.
        RangeTable {
            indoor_corridor: TrafficRanges {
                with_traffic: curve(10.0, 28.0),
                without_traffic: curve(12.0, 38.0),
            },
            indoor_room: TrafficRanges {
                with_traffic: curve(9.0, 16.0),
                without_traffic: curve(10.0, 22.0),
            },
            outdoor_open: TrafficRanges {
                with_traffic: curve(8.0, 13.0),
                without_traffic: curve(9.0, 18.0),
            },
        }
    }
}

/// Quality-to-throughput step table, one entry per integer quality step.
///
/// Anchored at the observed pairs (q=9 steady at ~900 Mbps, q=2 at 250 Mbps,
/// no link at 0); the remaining steps are interpolated calibration choices.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct ThroughputMap {
    pub steps_mbps: [f64; 11],
}

impl Default for ThroughputMap {
    fn default() -> Self {
        ThroughputMap {
            steps_mbps: [
                0.0, 100.0, 250.0, 400.0, 550.0, 700.0, 770.0, 850.0, 900.0, 900.0, 950.0,
            ],
        }
    }
}

/// Initial-association timing envelope (first beacon to stable quality).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct AssociationTiming {
    pub best_ms: f64,
    pub worst_ms: f64,
    pub mean_ms: f64,
}

impl Default for AssociationTiming {
    fn default() -> Self {
        AssociationTiming {
            best_ms: 146.28,
            worst_ms: 386.14,
            mean_ms: 245.4,
        }
    }
}

/// Beam-realignment dip timing and depth.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct RealignmentTiming {
    pub min_ms: f64,
    pub max_ms: f64,
    pub dip_q: f64,
}

impl Default for RealignmentTiming {
    fn default() -> Self {
        // Uniform on [5, 10.3] ms: mean 7.65 ms.
        RealignmentTiming {
            min_ms: 5.0,
            max_ms: 10.3,
            dip_q: 2.0,
        }
    }
}

/// Link-death rule under sustained deep degradation.
///
/// A link that sits at or below `quality_floor` for `after_ms` consecutive
/// milliseconds loses its transport session: quality and throughput drop to
/// zero and stay there until a new association.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct LinkDeath {
    pub quality_floor: u8,
    pub after_ms: u64,
}

impl Default for LinkDeath {
    fn default() -> Self {
        // Tuned so that a permanent no-NLOS blockage at 7 m disconnects
        // ~16.3 s after onset.
        LinkDeath {
            quality_floor: 2,
            after_ms: 16_000,
        }
    }
}

/// Ground-reflection spike noise on the blocked level of a no-NLOS blockage.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct SpikeNoise {
    pub per_second: f64,
    pub magnitude_units: f64,
}

impl Default for SpikeNoise {
    fn default() -> Self {
        SpikeNoise {
            per_second: 0.05,
            magnitude_units: 2.0,
        }
    }
}

/// Complete link-model calibration.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct LinkCalibration {
    pub antenna: AntennaPattern,
    pub ranges: RangeTable,
    pub throughput: ThroughputMap,
    pub association: AssociationTiming,
    pub realignment: RealignmentTiming,
    pub death: LinkDeath,
    pub spikes: SpikeNoise,
    /// Scatter (one standard deviation, quality units) of episode magnitudes
    /// around their cluster centers.
    pub episode_spread_units: f64,
    pub distributions: EpisodeDistributions,
}

impl Default for LinkCalibration {
    fn default() -> Self {
        LinkCalibration {
            antenna: AntennaPattern::default(),
            ranges: RangeTable::default(),
            throughput: ThroughputMap::default(),
            association: AssociationTiming::default(),
            realignment: RealignmentTiming::default(),
            death: LinkDeath::default(),
            spikes: SpikeNoise::default(),
            episode_spread_units: 0.7,
            distributions: EpisodeDistributions::default(),
        }
    }
}

impl LinkCalibration {
    pub fn validate(&self) -> Result<()> {
        self.distributions.validate()?;
        if self.episode_spread_units <= 0.0 {
            return Err(Error::Config("episode_spread_units must be positive".into()));
        }
        if !(self.association.best_ms < self.association.mean_ms
            && self.association.mean_ms < self.association.worst_ms)
        {
            return Err(Error::Config(
                "association timing must satisfy best < mean < worst".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.antenna.back_gain) {
            return Err(Error::Config("antenna back_gain must be in [0, 1]".into()));
        }
        Ok(())
    }

    pub fn sampler(&self, scenario: Scenario, bucket: DistanceBucket) -> EpisodeSampler {
        EpisodeSampler::new(
            self.distributions.stats(scenario, bucket),
            self.episode_spread_units,
        )
    }

    /// Draws one spike decision for a 1 ms step of a no-NLOS blocked level.
    pub fn spike_this_ms(&self, rng: &mut SimRng) -> bool {
        use rand::Rng;
        rng.gen::<f64>() < self.spikes.per_second / 1000.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_table_matches_published_values() {
        let d = EpisodeDistributions::default();
        assert_eq!(d.transient.at_3m.drop_time_mean_ms, 197.0);
        assert_eq!(d.transient.at_7m.recovery_time_mean_ms, Some(1648.0));
        assert_eq!(d.transient.at_7m.recovery_time_max_ms, Some(2434.0));
        assert_eq!(d.permanent.at_7m.drop_time_max_ms, 952.0);
        assert_eq!(d.permanent.at_3m.recovery_time_mean_ms, None);
        assert_eq!(d.permanent_nlos.at_3m.drop_centroid, 3.40);
        assert_eq!(d.permanent_nlos.at_7m.rise_centroid, 1.20);
        assert_eq!(d.transient.at_7m.drop_centroid, 7.72);
        assert_eq!(d.permanent.at_7m.rise_centroid, 1.56);
        d.validate().expect("default table valid");
    }

    #[test]
    fn bucket_mapping_picks_nearest() {
        assert_eq!(DistanceBucket::nearest(1.0), DistanceBucket::Near3m);
        assert_eq!(DistanceBucket::nearest(4.9), DistanceBucket::Near3m);
        assert_eq!(DistanceBucket::nearest(5.1), DistanceBucket::Far7m);
        assert_eq!(DistanceBucket::nearest(40.0), DistanceBucket::Far7m);
    }

    #[test]
    fn unknown_scenario_id_is_rejected() {
        assert!(Scenario::from_id(0).is_err());
        assert!(Scenario::from_id(4).is_err());
        assert_eq!(Scenario::from_id(2).unwrap(), Scenario::PermanentNoNlos);
    }

    #[test]
    fn range_curves_are_monotone_and_bounded() {
        let table = RangeTable::default();
        for env in [
            Environment::IndoorCorridor,
            Environment::IndoorRoom,
            Environment::OutdoorOpen,
        ] {
            for traffic in [true, false] {
                let curve = table.curve(env, traffic);
                let mut last = f64::INFINITY;
                for step in 0..200 {
                    let q = curve.quality_at(step as f64 * 0.25);
                    assert!(q <= last + 1e-12);
                    assert!((0.0..=10.0).contains(&q));
                    last = q;
                }
            }
            // Traffic shortens the usable range.
            assert!(
                table.curve(env, false).max_range_m > table.curve(env, true).max_range_m,
                "{env:?}"
            );
        }
        // Corridors outrange open outdoor space.
        assert!(
            table.curve(Environment::IndoorCorridor, true).max_range_m
                > table.curve(Environment::OutdoorOpen, true).max_range_m
        );
    }

    #[test]
    fn validation_catches_bad_tables() {
        let mut d = EpisodeDistributions::default();
        d.transient.at_3m.drop_time_mean_ms = 900.0; // above max 838
        assert!(d.validate().is_err());

        let mut d = EpisodeDistributions::default();
        d.permanent.at_3m.recovery_time_mean_ms = Some(100.0);
        assert!(d.validate().is_err());
    }
}
