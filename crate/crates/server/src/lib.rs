//! HTTP/JSON service over a [`Wiki`].
//!
//! Mutations go through the wiki's single writer; reads use snapshots.
//! Reasoning runs on the blocking pool so slow requests do not stall the
//! async workers. Tokens travel as tagged references (see
//! [`cnlwiki::grammar::TokenRef`]); request bodies may carry a `text`
//! field instead, which is tokenized against the current lexicon.

use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{FromRequest, Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{delete, get, post};
use axum::{Json, Router};
use cnlwiki::grammar::{complete, resolve_tokens, tokenize, CompletionSet, Token, TokenRef};
use cnlwiki::lexicon::Forms;
use cnlwiki::reasoner::{Hierarchy, ReasonerError};
use cnlwiki::verbalizer::RenderedSentence;
use cnlwiki::wiki::{ArticleView, Counts, SentenceId, WikiSentence};
use cnlwiki::{EntityId, Lexicon, LexiconEntry, LexiconError, Wiki, WikiError, WikiState, WordCategory};
use serde::{Deserialize, Serialize};
use tower_http::services::ServeDir;

/// Error body of every failed request.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiError {
    pub code: String,
    pub message: String,
    /// 1-based token position, for grammar errors.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub position: Option<usize>,
    #[serde(skip)]
    status: u16,
}

impl ApiError {
    fn bad_request(message: String) -> Self {
        ApiError { code: "BadRequest".into(), message, position: None, status: 400 }
    }
}

/// HTTP status for a wiki error.
pub fn status_of(e: &WikiError) -> StatusCode {
    match e {
        WikiError::UnknownEntity(_)
        | WikiError::UnknownSentence(_)
        | WikiError::Lexicon(LexiconError::UnknownEntity(_)) => StatusCode::NOT_FOUND,
        WikiError::Lexicon(LexiconError::DuplicateSurface(_)) | WikiError::EntityInUse(..) => StatusCode::CONFLICT,
        WikiError::Reasoner(ReasonerError::ResourceLimit { .. }) | WikiError::Io { .. } | WikiError::Format(_) => {
            StatusCode::INTERNAL_SERVER_ERROR
        }
        _ => StatusCode::BAD_REQUEST,
    }
}

impl From<WikiError> for ApiError {
    fn from(e: WikiError) -> Self {
        ApiError {
            code: e.code().to_string(),
            message: e.to_string(),
            position: e.position(),
            status: status_of(&e).as_u16(),
        }
    }
}

impl From<JsonRejection> for ApiError {
    fn from(r: JsonRejection) -> Self {
        ApiError::bad_request(r.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status).unwrap_or(StatusCode::BAD_REQUEST);
        (status, Json(self)).into_response()
    }
}

/// `Json` whose rejections are reported as [`ApiError`]s.
#[derive(FromRequest)]
#[from_request(via(Json), rejection(ApiError))]
pub struct Body<T>(pub T);

type ApiResult<T> = Result<Json<T>, ApiError>;

#[derive(Clone)]
struct App {
    wiki: Arc<Wiki>,
}

/// Runs blocking wiki work off the async workers.
async fn blocking<T, F>(f: F) -> Result<T, ApiError>
where
    T: Send + 'static,
    F: FnOnce() -> Result<T, WikiError> + Send + 'static,
{
    match tokio::task::spawn_blocking(f).await {
        Ok(r) => r.map_err(ApiError::from),
        Err(e) => Err(ApiError { code: "Internal".into(), message: e.to_string(), position: None, status: 500 }),
    }
}

/// A sentence or prefix, as token references or as text.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TokensBody {
    #[serde(default, alias = "prefix")]
    pub tokens: Option<Vec<TokenRef>>,
    #[serde(default)]
    pub text: Option<String>,
}

impl TokensBody {
    fn check(&self) -> Result<(), ApiError> {
        if self.tokens.is_some() && self.text.is_some() {
            return Err(ApiError::bad_request("give either tokens or text, not both".into()));
        }
        Ok(())
    }

    fn resolve(&self, lexicon: &Lexicon) -> Result<Vec<Token>, WikiError> {
        match (&self.tokens, &self.text) {
            (Some(refs), _) => Ok(resolve_tokens(refs, lexicon)?),
            (None, Some(text)) => Ok(tokenize(text, lexicon)?),
            (None, None) => Ok(Vec::new()),
        }
    }
}

fn resolve(body: &TokensBody, lexicon: &Lexicon) -> Result<Vec<Token>, ApiError> {
    body.check()?;
    Ok(body.resolve(lexicon)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArticleSummary {
    pub entity_id: EntityId,
    pub category: WordCategory,
    pub title: String,
    pub sentence_count: usize,
}

async fn list_articles(State(app): State<App>) -> ApiResult<Vec<ArticleSummary>> {
    let snap = app.wiki.snapshot();
    let list = snap
        .articles()
        .filter_map(|a| {
            let entry = snap.lexicon().get(a.entity_id)?;
            Some(ArticleSummary {
                entity_id: a.entity_id,
                category: entry.category,
                title: entry.title().to_string(),
                sentence_count: a.sentence_ids.len(),
            })
        })
        .collect();
    Ok(Json(list))
}

fn parse_id(raw: &str) -> Result<u64, ApiError> {
    raw.parse().map_err(|_| ApiError::bad_request(format!("`{raw}` is not an id")))
}

async fn article(State(app): State<App>, Path(id): Path<String>) -> ApiResult<ArticleView> {
    let id = EntityId(parse_id(&id)?);
    let snap = app.wiki.snapshot();
    blocking(move || snap.views(id)).await.map(Json)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NewWord {
    pub category: String,
    pub forms: Forms,
}

async fn add_word(State(app): State<App>, Body(word): Body<NewWord>) -> ApiResult<LexiconEntry> {
    let category: WordCategory = word.category.parse().map_err(ApiError::bad_request)?;
    blocking(move || app.wiki.add_word(category, word.forms)).await.map(Json)
}

async fn remove_word(State(app): State<App>, Path(id): Path<String>) -> ApiResult<LexiconEntry> {
    let id = EntityId(parse_id(&id)?);
    blocking(move || app.wiki.remove_word(id)).await.map(Json)
}

async fn completions(State(app): State<App>, Body(body): Body<TokensBody>) -> ApiResult<CompletionSet> {
    let snap = app.wiki.snapshot();
    let prefix = resolve(&body, snap.lexicon())?;
    complete(&prefix, snap.lexicon()).map(Json).map_err(|e| WikiError::from(e).into())
}

async fn submit(
    State(app): State<App>,
    Path(id): Path<String>,
    Body(body): Body<TokensBody>,
) -> ApiResult<WikiSentence> {
    let home = EntityId(parse_id(&id)?);
    body.check()?;
    blocking(move || {
        app.wiki.mutate(|state| {
            let tokens = body.resolve(state.lexicon())?;
            state.submit_sentence(home, &tokens)
        })
    })
    .await
    .map(Json)
}

async fn retract(State(app): State<App>, Path(id): Path<String>) -> ApiResult<WikiSentence> {
    let id = SentenceId(parse_id(&id)?);
    blocking(move || app.wiki.retract_sentence(id)).await.map(Json)
}

async fn recheck(State(app): State<App>, Path(id): Path<String>) -> ApiResult<WikiSentence> {
    let id = SentenceId(parse_id(&id)?);
    blocking(move || app.wiki.recheck_sentence(id)).await.map(Json)
}

async fn ask(State(app): State<App>, Body(body): Body<TokensBody>) -> ApiResult<Vec<RenderedSentence>> {
    let snap = app.wiki.snapshot();
    let tokens = resolve(&body, snap.lexicon())?;
    blocking(move || snap.ask(&tokens)).await.map(Json)
}

async fn hierarchy(State(app): State<App>) -> ApiResult<Hierarchy> {
    let snap = app.wiki.snapshot();
    blocking(move || snap.hierarchy().map(|h| (*h).clone())).await.map(Json)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Health {
    pub kb_version: u64,
    pub counts: Counts,
}

async fn health(State(app): State<App>) -> ApiResult<Health> {
    let snap: Arc<WikiState> = app.wiki.snapshot();
    Ok(Json(Health { kb_version: snap.kb_version(), counts: snap.counts() }))
}

async fn not_found() -> ApiError {
    ApiError { code: "NotFound".into(), message: "no such endpoint".into(), position: None, status: 404 }
}

/// All `/api` routes, plus the editor bundle when `static_dir` is set.
pub fn router(wiki: Arc<Wiki>, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/articles", get(list_articles))
        .route("/articles/{id}", get(article))
        .route("/articles/{id}/sentences", post(submit))
        .route("/words", post(add_word))
        .route("/words/{id}", delete(remove_word))
        .route("/complete", post(completions))
        .route("/sentences/{id}", delete(retract))
        .route("/sentences/{id}/recheck", post(recheck))
        .route("/ask", post(ask))
        .route("/hierarchy", get(hierarchy))
        .route("/health", get(health))
        .fallback(not_found)
        .with_state(App { wiki });
    let app = Router::new().nest("/api", api);
    match static_dir {
        Some(dir) => app.fallback_service(ServeDir::new(dir)),
        None => app,
    }
}
