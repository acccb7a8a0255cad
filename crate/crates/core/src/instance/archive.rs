use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{ModelParams, PlantedInstance};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Sidecar record stored next to the edge list as `<stem>.meta.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceMeta {
    pub params: ModelParams,
    pub seed: u64,
    pub s1: Vec<usize>,
    pub s2: Vec<usize>,
    #[serde(default)]
    pub adversary_edges: Vec<(usize, usize)>,
}

fn with_suffix(stem: &Path, suffix: &str) -> PathBuf {
    let mut s = stem.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Write `<stem>.edges` and `<stem>.meta.json`.
pub fn write_archive(inst: &PlantedInstance, stem: &Path) -> Result<()> {
    fs::write(with_suffix(stem, ".edges"), inst.graph.to_edge_list())?;
    let meta = InstanceMeta {
        params: inst.params,
        seed: inst.seed,
        s1: inst.s1.clone(),
        s2: inst.s2.clone(),
        adversary_edges: inst.adversary_edges.clone(),
    };
    fs::write(with_suffix(stem, ".meta.json"), serde_json::to_string_pretty(&meta)? + "\n")?;
    Ok(())
}

/// Read an archive. `path` may be the stem or either of the two files.
pub fn read_archive(path: &Path) -> Result<PlantedInstance> {
    let text = path.to_string_lossy();
    let stem = text
        .strip_suffix(".meta.json")
        .or_else(|| text.strip_suffix(".edges"))
        .unwrap_or(&text);
    let stem = Path::new(stem);
    let graph = Graph::read_edge_list(BufReader::new(fs::File::open(with_suffix(stem, ".edges"))?))?;
    let meta: InstanceMeta = serde_json::from_str(&fs::read_to_string(with_suffix(stem, ".meta.json"))?)?;
    meta.params.validate()?;
    if graph.n() != meta.params.n {
        return Err(Error::Parse(format!("edge list has {} vertices, metadata says {}", graph.n(), meta.params.n)));
    }
    let half = meta.params.k / 2;
    if meta.s1.len() != half || meta.s2.len() != half {
        return Err(Error::Parse("planted sides must each hold k/2 vertices".into()));
    }
    Ok(PlantedInstance {
        graph,
        s1: meta.s1,
        s2: meta.s2,
        params: meta.params,
        seed: meta.seed,
        adversary_edges: meta.adversary_edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{apply_monotone_adversary, gen_random_planted, AdversaryStrategy, BipartiteTopology};
    use crate::seed::rng_from_seed;

    #[test]
    fn round_trip() {
        let dir = std::env::temp_dir().join(format!("plantedbip-archive-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let inst = gen_random_planted(ModelParams::new(30, 8, 3, 0.3).unwrap(), &BipartiteTopology::RandomRegular, 4).unwrap();
        let inst = apply_monotone_adversary(&inst, &AdversaryStrategy::RandomExtra(0.1), &mut rng_from_seed(2)).unwrap();
        let stem = dir.join("inst");
        write_archive(&inst, &stem).unwrap();
        assert_eq!(read_archive(&stem).unwrap(), inst);
        assert_eq!(read_archive(&dir.join("inst.meta.json")).unwrap(), inst);
        fs::remove_dir_all(&dir).unwrap();
    }
}
