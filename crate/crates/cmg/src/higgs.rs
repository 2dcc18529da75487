//! Loader for the SNAP Higgs Twitter dataset.
//!
//! `higgs-social_network.edgelist` lists `a b` when user `a` follows user
//! `b`; information flows from `b` to `a`, so the spatial edge is `b -> a`.
//! `higgs-activity_time.txt` lists `a b timestamp kind`; a user is active on
//! a step when it retweets (`RT`) within that step. Steps are aligned to
//! multiples of the step length since the Unix epoch.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use cmg_core::graph::GraphBuilder;
use cmg_core::{ActivationMask, SpatialGraph};

use crate::error::{Error, Result};
use crate::formats::TimeAxis;

pub struct HiggsData {
    pub graph: SpatialGraph,
    pub mask: ActivationMask,
    pub time: TimeAxis,
    pub retweets: usize,
    pub skipped_self_loops: usize,
}

fn lines(path: &Path) -> Result<impl Iterator<Item = Result<(u64, String)>> + '_> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(BufReader::new(file)
        .lines()
        .enumerate()
        .map(move |(i, l)| l.map(|l| (i as u64 + 1, l)).map_err(|e| Error::io(path, e))))
}

fn bad(path: &Path, line: u64, msg: &str) -> Error {
    Error::Parse { path: path.to_path_buf(), line, msg: msg.to_string() }
}

pub fn load_higgs(social: &Path, activity: &Path, step_secs: i64) -> Result<HiggsData> {
    if step_secs <= 0 {
        return Err(Error::Config(format!("step must be positive, got {step_secs}")));
    }
    let mut b = GraphBuilder::new(true);
    let mut skipped_self_loops = 0;
    for item in lines(social)? {
        let (no, line) = item?;
        let mut it = line.split_ascii_whitespace();
        let (Some(follower), Some(followee)) = (it.next(), it.next()) else {
            if line.trim().is_empty() {
                continue;
            }
            return Err(bad(social, no, "expected two user ids"));
        };
        if follower == followee {
            skipped_self_loops += 1;
            continue;
        }
        b.add_edge(followee, follower, 1.0).map_err(|e| bad(social, no, &e.to_string()))?;
    }

    let mut events = Vec::new();
    for item in lines(activity)? {
        let (no, line) = item?;
        let f: Vec<&str> = line.split_ascii_whitespace().collect();
        if f.is_empty() {
            continue;
        }
        if f.len() != 4 {
            return Err(bad(activity, no, "expected `user user timestamp kind`"));
        }
        if f[3] != "RT" {
            continue;
        }
        let ts: i64 = f[2].parse().map_err(|_| bad(activity, no, "invalid timestamp"))?;
        events.push((b.add_node(f[0]), ts.div_euclid(step_secs)));
    }
    let graph = b.build();
    let first = events.iter().map(|e| e.1).min().unwrap_or(0);
    let last = events.iter().map(|e| e.1).max().unwrap_or(0);
    let steps = (last - first + 1) as usize;
    let mut bits = cmg_core::bits::BitMatrix::new(graph.num_nodes(), steps);
    for &(node, bin) in &events {
        bits.set(node as usize, (bin - first) as usize, true);
    }
    Ok(HiggsData {
        graph,
        mask: ActivationMask::from_bits(bits),
        time: TimeAxis { origin: first * step_secs, step_secs },
        retweets: events.len(),
        skipped_self_loops,
    })
}
