//! HTTP JSON API over a [`SessionStore`]. Every response body carries a
//! `"schema"` version field.

use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use fairfuse_core::ingestion::IngestError;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::session::{ServiceError, Session, SessionStore};
use crate::wire::{
    ConsensusView, DatasetView, Fixed6, RankingView, ReportView, SimilarityView, SliderView, SCHEMA_VERSION,
};

pub fn router(store: Arc<SessionStore>) -> Router {
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/similarity", get(get_similarity))
        .route("/sessions/{id}/consensus", post(generate_consensus))
        .route("/sessions/{id}/rankings/{rid}/edit", post(edit_ranking))
        .route("/sessions/{id}/rankings/{rid}/pin", post(pin_ranking))
        .route("/sessions/{id}/rankings/{rid}", axum::routing::delete(delete_ranking))
        .with_state(store)
}

pub struct ApiError(ServiceError);

impl From<ServiceError> for ApiError {
    fn from(e: ServiceError) -> Self {
        ApiError(e)
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError(ServiceError::Invalid(e.body_text()))
    }
}

impl ApiError {
    fn status(&self) -> StatusCode {
        match &self.0 {
            ServiceError::SessionNotFound(_) | ServiceError::RankingNotFound(_) => StatusCode::NOT_FOUND,
            ServiceError::CannotDeletePinned(_) | ServiceError::BaseRankingImmutable(_) => StatusCode::CONFLICT,
            ServiceError::Snapshot { .. } => StatusCode::INTERNAL_SERVER_ERROR,
            ServiceError::Ingest { .. } | ServiceError::Core(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ServiceError::ThresholdOutOfRange(_) | ServiceError::Invalid(_) => StatusCode::BAD_REQUEST,
        }
    }

    fn detail(&self) -> Value {
        let ServiceError::Ingest { file, source } = &self.0 else {
            return Value::Null;
        };
        let mut detail = json!({ "file": file });
        let extra = match source {
            IngestError::Csv { line, .. } => json!({ "line": line }),
            IngestError::DuplicateId { id, line } => json!({ "line": line, "id": id }),
            IngestError::NonFiniteScore { column, line, value } => {
                json!({ "line": line, "column": column, "value": value })
            }
            IngestError::InvalidPosition { line, value } => json!({ "line": line, "value": value }),
            IngestError::MissingColumn { column } | IngestError::UnknownColumn { column } => {
                json!({ "column": column })
            }
            _ => json!({}),
        };
        if let (Some(d), Value::Object(e)) = (detail.as_object_mut(), extra) {
            d.extend(e);
        }
        detail
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({
            "schema": SCHEMA_VERSION,
            "error": {
                "code": self.0.code(),
                "message": self.0.to_string(),
                "detail": self.detail(),
            }
        });
        (self.status(), Json(body)).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

#[derive(Debug, Deserialize)]
pub struct CreateSessionRequest {
    pub candidates_csv: String,
    /// Either a scores CSV (`id,<ranker>...`) or an explicit-rankings CSV
    /// (`position,<ranker>...`).
    pub rankings_csv: String,
    pub protected: String,
    pub bins: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct CreateSessionResponse {
    pub schema: u32,
    pub session_id: String,
    pub dataset: DatasetView,
    pub base_rankings: Vec<RankingView>,
    pub reports: Vec<ReportView>,
    pub similarity: SimilarityView,
    pub slider: SliderView,
}

async fn create_session(
    State(store): State<Arc<SessionStore>>,
    body: Result<Json<CreateSessionRequest>, JsonRejection>,
) -> Result<(StatusCode, Json<CreateSessionResponse>), ApiError> {
    let Json(req) = body?;
    let id = store.create(&req.candidates_csv, &req.rankings_csv, &req.protected, req.bins)?;
    let resp = store.read(&id, |s| {
        Ok(CreateSessionResponse {
            schema: SCHEMA_VERSION,
            session_id: id.clone(),
            dataset: (&s.dataset).into(),
            base_rankings: s.base_rankings.iter().map(Into::into).collect(),
            reports: s.reports().map(Into::into).collect(),
            similarity: (&s.similarity()?).into(),
            slider: slider(s)?,
        })
    })?;
    Ok((StatusCode::CREATED, Json(resp)))
}

fn slider(s: &Session) -> Result<SliderView, ServiceError> {
    Ok(SliderView {
        t_effective_min: Fixed6(s.t_effective_min()?),
    })
}

#[derive(Debug, Serialize)]
pub struct SessionView {
    pub schema: u32,
    pub id: String,
    pub dataset: DatasetView,
    pub bins: usize,
    pub base_rankings: Vec<RankingView>,
    pub generated: Vec<ConsensusView>,
    pub pinned_ids: Vec<String>,
    pub reports: Vec<ReportView>,
    pub similarity: SimilarityView,
    pub slider: SliderView,
    pub created_at: u64,
    pub updated_at: u64,
}

impl SessionView {
    pub fn new(s: &Session) -> Result<Self, ServiceError> {
        Ok(SessionView {
            schema: SCHEMA_VERSION,
            id: s.id.clone(),
            dataset: (&s.dataset).into(),
            bins: s.bins,
            base_rankings: s.base_rankings.iter().map(Into::into).collect(),
            generated: s.generated.iter().map(|g| ConsensusView::new(&g.result, g.edits)).collect(),
            pinned_ids: s.pinned_ids.iter().cloned().collect(),
            reports: s.reports().map(Into::into).collect(),
            similarity: (&s.similarity()?).into(),
            slider: slider(s)?,
            created_at: s.created_at,
            updated_at: s.updated_at,
        })
    }
}

async fn get_session(State(store): State<Arc<SessionStore>>, Path(id): Path<String>) -> ApiResult<SessionView> {
    Ok(Json(store.read(&id, SessionView::new)?))
}

#[derive(Debug, Serialize)]
pub struct SimilarityResponse {
    pub schema: u32,
    pub similarity: SimilarityView,
}

async fn get_similarity(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
) -> ApiResult<SimilarityResponse> {
    let similarity = store.read(&id, |s| Ok((&s.similarity()?).into()))?;
    Ok(Json(SimilarityResponse {
        schema: SCHEMA_VERSION,
        similarity,
    }))
}

#[derive(Debug, Deserialize)]
pub struct ConsensusRequest {
    pub t: f64,
}

#[derive(Debug, Serialize)]
pub struct ConsensusResponse {
    pub schema: u32,
    pub result: ConsensusView,
    pub report: ReportView,
    pub similarity: SimilarityView,
    pub slider: SliderView,
}

async fn generate_consensus(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
    body: Result<Json<ConsensusRequest>, JsonRejection>,
) -> ApiResult<ConsensusResponse> {
    let Json(req) = body?;
    let resp = store.write(&id, |s| {
        let generated = s.generate(req.t)?;
        let result = ConsensusView::new(&generated.result, generated.edits);
        let rid = generated.id().to_string();
        Ok(ConsensusResponse {
            schema: SCHEMA_VERSION,
            result,
            report: s.report(&rid)?.into(),
            similarity: (&s.similarity()?).into(),
            slider: slider(s)?,
        })
    })?;
    Ok(Json(resp))
}

#[derive(Debug, Deserialize)]
pub struct EditRequest {
    pub candidate: String,
    pub position: usize,
}

#[derive(Debug, Serialize)]
pub struct EditResponse {
    pub schema: u32,
    pub result: ConsensusView,
    pub report: ReportView,
    pub similarity: SimilarityView,
}

async fn edit_ranking(
    State(store): State<Arc<SessionStore>>,
    Path((id, rid)): Path<(String, String)>,
    body: Result<Json<EditRequest>, JsonRejection>,
) -> ApiResult<EditResponse> {
    let Json(req) = body?;
    let resp = store.write(&id, |s| {
        let edited = s.edit(&rid, &req.candidate, req.position)?;
        let result = ConsensusView::new(&edited.result, edited.edits);
        let new_id = edited.id().to_string();
        Ok(EditResponse {
            schema: SCHEMA_VERSION,
            result,
            report: s.report(&new_id)?.into(),
            similarity: (&s.similarity()?).into(),
        })
    })?;
    Ok(Json(resp))
}

#[derive(Debug, Serialize)]
pub struct PinResponse {
    pub schema: u32,
    pub ranking_id: String,
    pub pinned_ids: Vec<String>,
}

async fn pin_ranking(
    State(store): State<Arc<SessionStore>>,
    Path((id, rid)): Path<(String, String)>,
) -> ApiResult<PinResponse> {
    let resp = store.write(&id, |s| {
        let ranking_id = s.pin(&rid)?;
        Ok(PinResponse {
            schema: SCHEMA_VERSION,
            ranking_id,
            pinned_ids: s.pinned_ids.iter().cloned().collect(),
        })
    })?;
    Ok(Json(resp))
}

#[derive(Debug, Serialize)]
pub struct DeleteResponse {
    pub schema: u32,
    pub deleted: String,
}

async fn delete_ranking(
    State(store): State<Arc<SessionStore>>,
    Path((id, rid)): Path<(String, String)>,
) -> ApiResult<DeleteResponse> {
    let deleted = store.write(&id, |s| s.delete(&rid))?;
    Ok(Json(DeleteResponse {
        schema: SCHEMA_VERSION,
        deleted,
    }))
}

/// Serves the API until ctrl-c.
pub async fn serve(store: Arc<SessionStore>, port: u16) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
    tracing::info!(addr = %listener.local_addr()?, "listening");
    axum::serve(listener, router(store))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
