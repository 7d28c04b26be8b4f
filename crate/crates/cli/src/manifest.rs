//! Run manifests: the command line, format versions, resolved settings and
//! a digest per output file — enough to reproduce a run byte for byte in
//! exact mode.

use std::fs;

use sha2::{Digest, Sha256};

use dsm_core::formats::{GMX_VERSION, TMX_VERSION};

use crate::CliError;

#[derive(Default)]
pub struct Manifest {
    settings: Vec<(String, String)>,
    outputs: Vec<(String, String)>,
}

impl Manifest {
    pub fn setting(&mut self, key: &str, value: impl ToString) {
        self.settings.push((key.to_string(), value.to_string()));
    }

    pub fn record_output(&mut self, path: &str, content: &str) {
        let mut hasher = Sha256::new();
        hasher.update(content.as_bytes());
        let digest = hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect::<String>();
        self.outputs.push((path.to_string(), digest));
    }

    pub fn render(&self) -> String {
        let argv: Vec<String> = std::env::args().collect();
        let mut out = String::from("manifest 1\n");
        out.push_str(&format!("command {}\n", argv.join(" ")));
        out.push_str(&format!("tmx {TMX_VERSION}\n"));
        out.push_str(&format!("gmx {GMX_VERSION}\n"));
        for (key, value) in &self.settings {
            out.push_str(&format!("{key} {value}\n"));
        }
        for (path, digest) in &self.outputs {
            out.push_str(&format!("output {path} sha256 {digest}\n"));
        }
        out
    }

    pub fn write_to(&self, path: &str) -> Result<(), CliError> {
        fs::write(path, self.render()).map_err(|source| CliError::Io {
            path: path.to_string(),
            source,
        })
    }
}
