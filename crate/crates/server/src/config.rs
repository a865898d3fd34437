//! Service configuration: defaults, an optional TOML file, then CLI flags
//! and environment overrides on top.

use std::net::{IpAddr, Ipv4Addr};
use std::path::{Path, PathBuf};

use mathworld::assessment::InterpretationBands;
use mathworld::lesson::{MessageCatalog, SessionConfig};
use mathworld::problem_gen::TemplateSet;
use mathworld::rewards::Catalog;
use serde::Deserialize;

use crate::StartupError;

pub const DEFAULT_PORT: u16 = 8080;

#[derive(Debug, Clone, PartialEq)]
pub struct ServiceConfig {
    pub host: IpAddr,
    pub port: u16,
    pub data_dir: PathBuf,
    pub session: SessionConfig,
    /// Store catalog JSON; the built-in catalog when absent.
    pub catalog_path: Option<PathBuf>,
    /// Word-problem templates JSON; the built-in set when absent.
    pub templates_path: Option<PathBuf>,
    /// Learner-facing message catalog JSON; built-in English when absent.
    pub messages_path: Option<PathBuf>,
    /// Interpretation band preset used when a request does not name one.
    pub bands: String,
    /// Fixes session ids and question seeds, for reproducible test runs.
    pub seed: Option<u64>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            host: IpAddr::V4(Ipv4Addr::LOCALHOST),
            port: DEFAULT_PORT,
            data_dir: PathBuf::from("mathworld-data"),
            session: SessionConfig::default(),
            catalog_path: None,
            templates_path: None,
            messages_path: None,
            bands: "equal-width".into(),
            seed: None,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    host: Option<IpAddr>,
    port: Option<u16>,
    data_dir: Option<PathBuf>,
    session: Option<SessionConfig>,
    catalog: Option<PathBuf>,
    templates: Option<PathBuf>,
    messages: Option<PathBuf>,
    bands: Option<String>,
    seed: Option<u64>,
}

/// Everything the service loads from configuration, validated.
#[derive(Debug)]
pub struct Resources {
    pub catalog: Catalog,
    pub templates: &'static TemplateSet,
    pub messages: MessageCatalog,
    pub bands: InterpretationBands,
}

impl ServiceConfig {
    /// Reads a TOML file over the defaults. Relative paths inside the file
    /// are taken relative to the file's directory.
    pub fn from_toml_file(path: &Path) -> Result<Self, StartupError> {
        let bad = |msg: String| StartupError::Config { path: path.to_path_buf(), msg };
        let text = std::fs::read_to_string(path).map_err(|e| bad(e.to_string()))?;
        let file: FileConfig = toml::from_str(&text).map_err(|e| bad(e.to_string()))?;
        let base = path.parent().unwrap_or(Path::new(""));
        let rel = |p: PathBuf| if p.is_absolute() { p } else { base.join(p) };
        let d = ServiceConfig::default();
        Ok(Self {
            host: file.host.unwrap_or(d.host),
            port: file.port.unwrap_or(d.port),
            data_dir: file.data_dir.map(rel).unwrap_or(d.data_dir),
            session: file.session.unwrap_or(d.session),
            catalog_path: file.catalog.map(rel),
            templates_path: file.templates.map(rel),
            messages_path: file.messages.map(rel),
            bands: file.bands.unwrap_or(d.bands),
            seed: file.seed,
        })
    }

    /// Checks every setting and loads the referenced files. Errors name the
    /// offending file.
    pub fn load_resources(&self) -> Result<Resources, StartupError> {
        if self.port == 0 {
            return Err(StartupError::Invalid("port must be within 1..=65535".into()));
        }
        self.session
            .validate()
            .map_err(|e| StartupError::Invalid(format!("session settings: {e}")))?;
        let bands = InterpretationBands::preset(&self.bands).map_err(|e| StartupError::Invalid(e.to_string()))?;
        let file_err = |path: &Path, msg: String| StartupError::Config { path: path.to_path_buf(), msg };

        let catalog = match &self.catalog_path {
            Some(p) => Catalog::load(p).map_err(|e| file_err(p, e.to_string()))?,
            None => Catalog::builtin().clone(),
        };
        let templates = match &self.templates_path {
            // Loaded once per process start and shared by every session.
            Some(p) => &*Box::leak(Box::new(TemplateSet::load(p).map_err(|e| file_err(p, e.to_string()))?)),
            None => TemplateSet::builtin(),
        };
        let messages = match &self.messages_path {
            Some(p) => MessageCatalog::load(p).map_err(|e| file_err(p, e.to_string()))?,
            None => MessageCatalog::builtin().clone(),
        };
        Ok(Resources { catalog, templates, messages, bands })
    }
}
