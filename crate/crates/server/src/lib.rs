//! HTTP front end for the arithmetic practice game.
//!
//! Every mutating endpoint accepts an `Idempotency-Key` header; repeating a
//! request with the same key returns the original result without a second
//! effect. Writes for one learner are serialized through a per-learner
//! async lock, and each is durable before its response is sent.

pub mod config;
mod error;
mod routes;
mod sessions;

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::atomic::AtomicU64;
use std::sync::{Arc, Mutex};

use mathworld::lesson::LessonEngine;
use mathworld::problem_gen::Generator;
use mathworld::store::{LearnerStore, StoreError};
use mathworld::LearnerId;
use tokio::net::TcpListener;
use tokio::sync::oneshot;
use tokio::task::JoinHandle;

pub use config::{Resources, ServiceConfig};
pub use error::ApiError;
pub use routes::router;
pub use sessions::SessionRecord;

#[derive(Debug, thiserror::Error)]
pub enum StartupError {
    #[error("{}: {msg}", path.display())]
    Config { path: PathBuf, msg: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("cannot listen on {addr}: {source}")]
    Bind { addr: SocketAddr, source: std::io::Error },
    #[error("learner store: {0}")]
    Store(#[from] StoreError),
}

/// One async lock per learner; every write for that learner holds it.
#[derive(Debug, Default)]
struct LearnerLocks(Mutex<HashMap<LearnerId, Arc<tokio::sync::Mutex<()>>>>);

impl LearnerLocks {
    async fn acquire(&self, id: LearnerId) -> tokio::sync::OwnedMutexGuard<()> {
        let lock = self.0.lock().expect("lock table poisoned").entry(id).or_default().clone();
        lock.lock_owned().await
    }
}

/// Shared state behind every handler.
#[derive(Debug)]
pub struct AppState {
    config: ServiceConfig,
    resources: Resources,
    engine: LessonEngine<'static>,
    store: LearnerStore,
    sessions: sessions::SessionRegistry,
    locks: LearnerLocks,
    /// Next candidate index for seeded session ids.
    seeded_sessions: AtomicU64,
}

impl AppState {
    /// Loads configuration resources and opens the data directory.
    pub fn open(config: ServiceConfig) -> Result<Self, StartupError> {
        let resources = config.load_resources()?;
        let engine = LessonEngine::new(Generator::new(resources.templates), config.session)
            .map_err(|e| StartupError::Invalid(e.to_string()))?;
        let store = LearnerStore::open(&config.data_dir)?;
        let sessions = sessions::SessionRegistry::open(config.data_dir.join("sessions"))?;
        tracing::info!(learners = store.learner_ids().len(), sessions = sessions.len(), "data loaded");
        Ok(Self {
            config,
            resources,
            engine,
            store,
            sessions,
            locks: LearnerLocks::default(),
            seeded_sessions: AtomicU64::new(0),
        })
    }

    pub fn config(&self) -> &ServiceConfig {
        &self.config
    }

    pub fn store(&self) -> &LearnerStore {
        &self.store
    }
}

/// A running service. Dropping the handle leaves the server running; call
/// [`ServerHandle::shutdown`] to stop it.
#[derive(Debug)]
pub struct ServerHandle {
    addr: SocketAddr,
    stop: Option<oneshot::Sender<()>>,
    task: JoinHandle<std::io::Result<()>>,
}

impl ServerHandle {
    pub fn local_addr(&self) -> SocketAddr {
        self.addr
    }

    /// Stops accepting connections and waits for in-flight requests.
    pub async fn shutdown(mut self) -> std::io::Result<()> {
        if let Some(stop) = self.stop.take() {
            let _ = stop.send(());
        }
        self.task.await.map_err(std::io::Error::other)?
    }
}

/// Validates `config`, binds its address and starts serving.
pub async fn serve(config: ServiceConfig) -> Result<ServerHandle, StartupError> {
    let addr = SocketAddr::new(config.host, config.port);
    let state = AppState::open(config)?;
    let listener = TcpListener::bind(addr).await.map_err(|source| StartupError::Bind { addr, source })?;
    serve_on(listener, state)
}

/// Serves on an already bound listener; the configured port is ignored.
pub fn serve_on(listener: TcpListener, state: AppState) -> Result<ServerHandle, StartupError> {
    let addr = listener.local_addr().map_err(|source| StartupError::Bind {
        addr: SocketAddr::new(state.config.host, state.config.port),
        source,
    })?;
    let (stop, stopped) = oneshot::channel::<()>();
    let app = router(Arc::new(state));
    let task = tokio::spawn(async move {
        axum::serve(listener, app)
            .with_graceful_shutdown(async {
                let _ = stopped.await;
            })
            .await
    });
    tracing::info!(%addr, "listening");
    Ok(ServerHandle { addr, stop: Some(stop), task })
}
