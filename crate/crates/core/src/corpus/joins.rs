use serde::{Deserialize, Serialize};

use super::UtteranceRecord;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct JoinConfig {
    pub pause_seconds: f64,
    pub max_total_seconds: f64,
}

impl Default for JoinConfig {
    fn default() -> Self {
        JoinConfig { pause_seconds: 0.22, max_total_seconds: 15.0 }
    }
}

/// Consecutive utterances `start..start + len` forming one joint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointPlan {
    pub start: usize,
    pub len: usize,
    pub total_seconds: f64,
}

// absorbs rounding in sums of decimal durations
const EPS: f64 = 1e-9;

/// For every starting utterance, the longest run of successors whose
/// durations plus inter-part pauses fit the cap. Runs of one are dropped.
pub fn plan_joints(durations: &[f64], cfg: &JoinConfig) -> Vec<JointPlan> {
    let mut plans = Vec::new();
    for start in 0..durations.len() {
        let mut total = durations[start];
        let mut len = 1;
        while let Some(&next) = durations.get(start + len) {
            let candidate = total + cfg.pause_seconds + next;
            if candidate > cfg.max_total_seconds + EPS {
                break;
            }
            total = candidate;
            len += 1;
        }
        if len >= 2 && total <= cfg.max_total_seconds + EPS {
            plans.push(JointPlan { start, len, total_seconds: total });
        }
    }
    plans
}

/// Joint records for a list of consecutive utterances. Ids are
/// `{first}+{last}`; audio lives at `{joint_dir}/{id}.wav` spanning the
/// whole file.
pub fn make_joint_utterances(records: &[UtteranceRecord], cfg: &JoinConfig, joint_dir: &str) -> Vec<UtteranceRecord> {
    let durations: Vec<f64> = records.iter().map(UtteranceRecord::duration).collect();
    plan_joints(&durations, cfg)
        .into_iter()
        .map(|p| {
            let parts = &records[p.start..p.start + p.len];
            let id = format!("{}+{}", parts[0].utt_id, parts[p.len - 1].utt_id);
            let transcript = parts.iter().map(|r| r.transcript.trim()).collect::<Vec<_>>().join(" ");
            let mut rec = UtteranceRecord::new(id.clone(), format!("{joint_dir}/{id}.wav"), 0.0, p.total_seconds, transcript);
            rec.is_joint = true;
            rec.source_ids = parts.iter().map(|r| r.utt_id.clone()).collect();
            rec.speaker = parts[0].speaker.clone();
            rec.enhanced = parts.iter().all(|r| r.enhanced);
            rec
        })
        .collect()
}

/// Concatenates parts with `round(pause · rate)` zero samples between them.
pub fn render_joint(parts: &[&[f64]], sample_rate: u32, pause_seconds: f64) -> Vec<f64> {
    let gap = (pause_seconds * sample_rate as f64).round() as usize;
    let mut out = Vec::with_capacity(parts.iter().map(|p| p.len() + gap).sum());
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            out.resize(out.len() + gap, 0.0);
        }
        out.extend_from_slice(p);
    }
    out
}
