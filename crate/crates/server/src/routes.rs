use std::sync::atomic::Ordering;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use chrono::Utc;
use mathworld::assessment::{build_report, parse_responses_csv, render_table, AssessmentInput, InterpretationBands};
use mathworld::lesson::{unlocked_topics, Activity, MessageKey, PerStage, SessionState, Stage, Tally};
use mathworld::problem_gen::{curriculum, render_presentation, Operator, Presentation, Rendering, TopicId};
use mathworld::rewards::{StoreItem, TicketWallet};
use mathworld::store::{DateStyle, ReportFormat};
use mathworld::{LearnerId, Remark};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use uuid::Uuid;

use crate::error::ApiError;
use crate::sessions::SessionRecord;
use crate::AppState;

type Shared = Arc<AppState>;
type ApiResult<T> = Result<T, ApiError>;

pub const IDEMPOTENCY_HEADER: &str = "idempotency-key";

pub fn router(state: Shared) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/learners", post(register))
        .route("/learners/{id}/topics", get(topics))
        .route("/learners/{id}/wallet", get(wallet))
        .route("/learners/{id}/purchase", post(purchase))
        .route("/learners/{id}/report", get(report))
        .route("/store/catalog", get(catalog))
        .route("/sessions", post(start_session))
        .route("/sessions/{id}", get(session))
        .route("/sessions/{id}/answer", post(answer))
        .route("/sessions/{id}/advance", post(advance))
        .route("/sessions/{id}/finalize", post(finalize))
        .route("/assessment/report", post(assessment_report))
        .with_state(state)
}

fn body<T>(payload: Result<Json<T>, JsonRejection>) -> ApiResult<T> {
    payload.map(|Json(v)| v).map_err(|e| ApiError::BadRequest(e.body_text()))
}

fn request_key(headers: &HeaderMap) -> ApiResult<Option<String>> {
    let Some(raw) = headers.get(IDEMPOTENCY_HEADER) else {
        return Ok(None);
    };
    let key = raw
        .to_str()
        .ok()
        .map(str::trim)
        .filter(|k| !k.is_empty() && k.len() <= 128)
        .ok_or_else(|| ApiError::BadRequest("Idempotency-Key must be 1 to 128 visible ASCII characters".into()))?;
    Ok(Some(key.to_string()))
}

fn learner_id(raw: &str) -> ApiResult<LearnerId> {
    raw.parse().map_err(|_| ApiError::NotFound(format!("no learner `{raw}`")))
}

/// Runs blocking store and file work off the async workers.
async fn blocking<T, F>(state: &Shared, f: F) -> ApiResult<T>
where
    T: Send + 'static,
    F: FnOnce(&AppState) -> ApiResult<T> + Send + 'static,
{
    let state = state.clone();
    tokio::task::spawn_blocking(move || f(&state))
        .await
        .map_err(|e| ApiError::Internal(format!("worker failed: {e}")))?
}

async fn health() -> Json<Value> {
    Json(json!({ "status": "ok" }))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RegisterBody {
    display_name: String,
    #[serde(default = "second_grade")]
    grade_level: u8,
}

fn second_grade() -> u8 {
    2
}

async fn register(
    State(state): State<Shared>,
    headers: HeaderMap,
    payload: Result<Json<RegisterBody>, JsonRejection>,
) -> ApiResult<(StatusCode, Json<Value>)> {
    let req = body(payload)?;
    let key = request_key(&headers)?;
    let profile = blocking(&state, move |s| {
        Ok(s.store.register(&req.display_name, req.grade_level, Utc::now(), key.as_deref())?)
    })
    .await?;
    Ok((StatusCode::CREATED, Json(json!(profile))))
}

#[derive(Debug, Serialize)]
struct TopicView {
    topic: TopicId,
    name: &'static str,
    lesson: &'static str,
    ordinal: usize,
    unlocked: bool,
    passed: bool,
}

async fn topics(State(state): State<Shared>, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    let id = learner_id(&id)?;
    let history = state.store.load_state(id)?.history;
    let unlocked = unlocked_topics(&history);
    let views: Vec<TopicView> = curriculum()
        .iter()
        .map(|&t| TopicView {
            topic: t,
            name: t.name(),
            lesson: t.lesson().name(),
            ordinal: t.ordinal(),
            unlocked: unlocked.contains(&t),
            passed: history.iter().any(|r| r.topic == t && r.remark == Remark::Passed),
        })
        .collect();
    Ok(Json(json!({ "learner_id": id, "topics": views })))
}

fn wallet_view(w: &TicketWallet) -> Value {
    json!({ "learner_id": w.learner_id, "earned": w.earned, "spent": w.spent, "balance": w.balance() })
}

async fn wallet(State(state): State<Shared>, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    let id = learner_id(&id)?;
    Ok(Json(wallet_view(&state.store.load_state(id)?.wallet)))
}

async fn catalog(State(state): State<Shared>) -> Json<Value> {
    let items: &[StoreItem] = state.resources.catalog.items();
    Json(json!({ "items": items }))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PurchaseBody {
    item_id: String,
}

async fn purchase(
    State(state): State<Shared>,
    Path(id): Path<String>,
    headers: HeaderMap,
    payload: Result<Json<PurchaseBody>, JsonRejection>,
) -> ApiResult<Json<Value>> {
    let id = learner_id(&id)?;
    let req = body(payload)?;
    let key = request_key(&headers)?;
    let item = state.resources.catalog.get(&req.item_id)?.clone();
    let _guard = state.locks.acquire(id).await;
    let applied = blocking(&state, move |s| Ok(s.store.purchase(id, &item, key.as_deref())?)).await?;
    Ok(Json(json!({
        "item_id": req.item_id,
        "replayed": applied.replayed,
        "wallet": wallet_view(&applied.snapshot.wallet),
    })))
}

#[derive(Debug, Deserialize)]
struct ReportQuery {
    format: Option<String>,
    dates: Option<DateStyle>,
}

async fn report(
    State(state): State<Shared>,
    Path(id): Path<String>,
    Query(q): Query<ReportQuery>,
) -> ApiResult<Response> {
    let id = learner_id(&id)?;
    match q.format.as_deref() {
        None | Some("csv") => {}
        Some(other) => return Err(ApiError::BadRequest(format!("unsupported report format `{other}`"))),
    }
    let format = match q.dates {
        Some(dates) => ReportFormat::Csv { dates },
        None => ReportFormat::default(),
    };
    let csv = state.store.export_report(id, format)?;
    Ok(([(header::CONTENT_TYPE, "text/csv; charset=utf-8")], csv).into_response())
}

#[derive(Debug, Serialize)]
struct QuestionView {
    activity: Activity,
    presentation: Presentation,
    prompt_text: String,
    operands: Vec<u32>,
    operator: Operator,
    #[serde(skip_serializing_if = "Option::is_none")]
    rendering: Option<Rendering>,
}

/// What the client may see of a session. Answers stay on the server.
#[derive(Debug, Serialize)]
struct SessionView {
    session_id: String,
    learner_id: LearnerId,
    topic: TopicId,
    topic_name: &'static str,
    stage: Stage,
    finished: bool,
    finalized: bool,
    time_limit_seconds: u32,
    remaining: usize,
    tally: PerStage<Tally>,
    current: Option<QuestionView>,
}

fn session_view(rec: &SessionRecord) -> Value {
    let s = &rec.state;
    let current = s.current().map(|q| QuestionView {
        activity: q.activity,
        presentation: q.problem.presentation,
        prompt_text: q.problem.prompt_text.clone(),
        operands: q.problem.operands.clone(),
        operator: q.problem.operator,
        rendering: render_presentation(&q.problem, q.problem.presentation).ok(),
    });
    json!(SessionView {
        session_id: rec.session_id.clone(),
        learner_id: s.learner_id,
        topic: s.topic,
        topic_name: s.topic.name(),
        stage: s.stage,
        finished: s.finished,
        finalized: rec.outcome.is_some(),
        time_limit_seconds: s.config.time_limit_seconds,
        remaining: s.queue.len(),
        tally: s.tally,
        current,
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StartBody {
    learner_id: LearnerId,
    topic: TopicId,
}

fn fnv1a(parts: &[&[u8]]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for part in parts {
        for &b in *part {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

impl AppState {
    /// Session id and question seed for a new session.
    fn new_session_identity(&self, learner: LearnerId, key: Option<&str>) -> (String, u64) {
        let id = match (key, self.config.seed) {
            (Some(k), _) => Uuid::new_v5(&Uuid::NAMESPACE_OID, format!("learner:{}:{k}", learner.0).as_bytes()),
            (None, Some(seed)) => loop {
                let n = self.seeded_sessions.fetch_add(1, Ordering::Relaxed);
                let id = Uuid::new_v5(&Uuid::NAMESPACE_OID, format!("seed:{seed}:{n}").as_bytes());
                if !self.sessions.contains(&id.to_string()) {
                    break id;
                }
            },
            (None, None) => Uuid::new_v4(),
        };
        let id = id.to_string();
        let seed = match self.config.seed {
            Some(seed) => fnv1a(&[&seed.to_le_bytes(), id.as_bytes()]),
            None => rand::random(),
        };
        (id, seed)
    }

    fn session_for_update(&self, id: &str) -> ApiResult<SessionRecord> {
        self.sessions.get(id).ok_or_else(|| ApiError::NotFound(format!("no session `{id}`")))
    }

    fn persist(&self, rec: SessionRecord) -> ApiResult<()> {
        self.sessions
            .save(rec)
            .map_err(|e| ApiError::Internal(format!("saving session: {e}")))
    }
}

async fn start_session(
    State(state): State<Shared>,
    headers: HeaderMap,
    payload: Result<Json<StartBody>, JsonRejection>,
) -> ApiResult<(StatusCode, Json<Value>)> {
    let req = body(payload)?;
    let key = request_key(&headers)?;
    let _guard = state.locks.acquire(req.learner_id).await;
    blocking(&state, move |s| {
        let (session_id, seed) = s.new_session_identity(req.learner_id, key.as_deref());
        if let Some(existing) = s.sessions.get(&session_id) {
            return Ok((StatusCode::CREATED, Json(session_view(&existing))));
        }
        let snapshot = s.store.load_state(req.learner_id)?;
        let state = s
            .engine
            .start_session(&snapshot.profile, req.topic, seed, &snapshot.history, Utc::now())?;
        let rec = SessionRecord { session_id, seed, state, replies: Default::default(), outcome: None };
        let view = session_view(&rec);
        s.persist(rec)?;
        Ok((StatusCode::CREATED, Json(view)))
    })
    .await
}

async fn session(State(state): State<Shared>, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    Ok(Json(session_view(&state.session_for_update(&id)?)))
}

/// Runs `f` on session `id` under its learner's lock, persisting the
/// result. A repeated request key returns the stored reply instead.
async fn mutate_session<F>(state: Shared, id: String, key: Option<String>, f: F) -> ApiResult<Json<Value>>
where
    F: FnOnce(&AppState, &mut SessionRecord) -> ApiResult<Value> + Send + 'static,
{
    let learner = state.session_for_update(&id)?.state.learner_id;
    let _guard = state.locks.acquire(learner).await;
    blocking(&state, move |s| {
        let mut rec = s.session_for_update(&id)?;
        if let Some(reply) = key.as_ref().and_then(|k| rec.replies.get(k)) {
            return Ok(Json(reply.clone()));
        }
        let reply = f(s, &mut rec)?;
        if let Some(k) = key {
            rec.replies.insert(k, reply.clone());
        }
        s.persist(rec)?;
        Ok(Json(reply))
    })
    .await
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnswerBody {
    answer: u32,
    elapsed_seconds: u32,
}

async fn answer(
    State(state): State<Shared>,
    Path(id): Path<String>,
    headers: HeaderMap,
    payload: Result<Json<AnswerBody>, JsonRejection>,
) -> ApiResult<Json<Value>> {
    let req = body(payload)?;
    let key = request_key(&headers)?;
    mutate_session(state, id, key, move |s, rec| {
        let fb = rec.state.submit_answer(req.answer, req.elapsed_seconds)?;
        let messages = &s.resources.messages;
        Ok(json!({
            "feedback": {
                "event": fb.event,
                "message": messages.get(fb.event.message_key()),
                "correct_answer": fb.correct_answer,
                "stage_complete": fb.stage_complete,
                "stage_message": fb.stage_complete.then(|| messages.get(MessageKey::StageComplete)),
            },
            "session": session_view(rec),
        }))
    })
    .await
}

fn stage_index(state: &SessionState) -> u64 {
    Stage::ALL.iter().position(|&s| s == state.stage).unwrap_or(0) as u64
}

async fn advance(State(state): State<Shared>, Path(id): Path<String>, headers: HeaderMap) -> ApiResult<Json<Value>> {
    let key = request_key(&headers)?;
    mutate_session(state, id, key, |s, rec| {
        let seed = rec.seed.wrapping_add(stage_index(&rec.state) + 1);
        s.engine.advance_stage(&mut rec.state, seed)?;
        Ok(session_view(rec))
    })
    .await
}

async fn finalize(State(state): State<Shared>, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    // Finalizing is idempotent by itself: the score is committed under a
    // request id derived from the session.
    mutate_session(state, id, None, |s, rec| {
        if let Some(done) = &rec.outcome {
            return Ok(done.clone());
        }
        let record = rec.state.finalize()?;
        let commit_key = format!("session:{}:finalize", rec.session_id);
        let applied = s.store.complete_topic(rec.state.learner_id, record.clone(), Some(&commit_key))?;
        let tickets = mathworld::rewards::award_tickets(&record);
        let key = if record.passed() { MessageKey::Passed } else { MessageKey::Failed };
        let outcome = json!({
            "session_id": rec.session_id,
            "record": record,
            "tickets_awarded": tickets,
            "wallet": wallet_view(&applied.snapshot.wallet),
            "message": s.resources.messages.get(key),
        });
        rec.outcome = Some(outcome.clone());
        Ok(outcome)
    })
    .await
}

#[derive(Debug, Deserialize)]
struct AssessmentQuery {
    bands: Option<String>,
    format: Option<String>,
}

async fn assessment_report(
    State(state): State<Shared>,
    Query(q): Query<AssessmentQuery>,
    headers: HeaderMap,
    raw: Bytes,
) -> ApiResult<Response> {
    let content_type = headers.get(header::CONTENT_TYPE).and_then(|v| v.to_str().ok()).unwrap_or("application/json");
    let text = std::str::from_utf8(&raw).map_err(|_| ApiError::BadRequest("body is not UTF-8".into()))?;
    let input: AssessmentInput = if content_type.starts_with("text/csv") {
        parse_responses_csv(text)?
    } else {
        serde_json::from_str(text).map_err(|e| ApiError::BadRequest(format!("assessment input: {e}")))?
    };
    let bands = match q.bands.as_deref() {
        Some(name) => InterpretationBands::preset(name)?,
        None => state.resources.bands.clone(),
    };
    let report = build_report(&input, &bands)?;
    match q.format.as_deref() {
        None | Some("json") => Ok(Json(report).into_response()),
        Some("table") => Ok(([(header::CONTENT_TYPE, "text/plain; charset=utf-8")], render_table(&report)).into_response()),
        Some(other) => Err(ApiError::BadRequest(format!("unsupported report format `{other}`"))),
    }
}
