//! Chat-completion gateway: the single choke point for model calls, with
//! retry on transient transport failures, an in-flight concurrency bound,
//! optional call recording, and offline backends (scripted mock, cassette
//! replay, closure).

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Condvar, Mutex};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

/// Environment variable holding the bearer token for remote backends.
pub const API_KEY_ENV: &str = "GLOBALRAG_API_KEY";

/// One chat call: a system prompt, a user prompt, and sampling settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatRequest {
    pub system_prompt: String,
    pub user_prompt: String,
    pub temperature: f64,
    pub max_tokens: u32,
}

impl ChatRequest {
    /// Deterministic defaults: temperature 0, generous token budget.
    pub fn new(system_prompt: &str, user_prompt: &str) -> Self {
        ChatRequest {
            system_prompt: system_prompt.to_string(),
            user_prompt: user_prompt.to_string(),
            temperature: 0.0,
            max_tokens: 1024,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TokenUsage {
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatResponse {
    pub text: String,
    #[serde(default)]
    pub usage: TokenUsage,
}

impl ChatResponse {
    pub fn text(text: &str) -> Self {
        ChatResponse {
            text: text.to_string(),
            usage: TokenUsage::default(),
        }
    }
}

/// Stable content hash of a (system, user) prompt pair, hex-encoded.
/// Length framing keeps distinct pairs from colliding on concatenation.
pub fn request_hash(system_prompt: &str, user_prompt: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update((system_prompt.len() as u64).to_be_bytes());
    hasher.update(system_prompt.as_bytes());
    hasher.update((user_prompt.len() as u64).to_be_bytes());
    hasher.update(user_prompt.as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Error)]
pub enum GatewayError {
    #[error("chat transport failure after {attempts} attempt(s): {message}")]
    Transport { attempts: u32, message: String },
    #[error("chat backend protocol error: {0}")]
    Protocol(String),
    #[error("no scripted reply for request hash {hash}")]
    MockMiss { hash: String },
    #[error("cassette error: {0}")]
    Cassette(String),
}

impl GatewayError {
    fn is_transient(&self) -> bool {
        matches!(self, GatewayError::Transport { .. })
    }
}

/// A provider of chat completions.
pub trait ChatBackend: Send + Sync {
    fn complete(&self, request: &ChatRequest) -> Result<ChatResponse, GatewayError>;
}

/// Backend backed by a closure; handy in tests.
pub struct FnChat<F>(pub F);

impl<F> ChatBackend for FnChat<F>
where
    F: Fn(&ChatRequest) -> Result<ChatResponse, GatewayError> + Send + Sync,
{
    fn complete(&self, request: &ChatRequest) -> Result<ChatResponse, GatewayError> {
        (self.0)(request)
    }
}

enum MockRule {
    Exact {
        system_prompt: String,
        user_prompt: String,
        reply: String,
    },
    UserPrefix {
        prefix: String,
        reply: String,
    },
    UserContains {
        needle: String,
        reply: String,
    },
}

/// Scripted backend: rules are checked in registration order, first match
/// wins. An unmatched request fails, naming the request hash so the missing
/// script entry can be added.
#[derive(Default)]
pub struct MockChat {
    rules: Vec<MockRule>,
    calls: AtomicU64,
}

impl MockChat {
    pub fn new() -> Self {
        MockChat::default()
    }

    pub fn on_exact(mut self, system_prompt: &str, user_prompt: &str, reply: &str) -> Self {
        self.rules.push(MockRule::Exact {
            system_prompt: system_prompt.to_string(),
            user_prompt: user_prompt.to_string(),
            reply: reply.to_string(),
        });
        self
    }

    pub fn on_user_prefix(mut self, prefix: &str, reply: &str) -> Self {
        self.rules.push(MockRule::UserPrefix {
            prefix: prefix.to_string(),
            reply: reply.to_string(),
        });
        self
    }

    pub fn on_user_contains(mut self, needle: &str, reply: &str) -> Self {
        self.rules.push(MockRule::UserContains {
            needle: needle.to_string(),
            reply: reply.to_string(),
        });
        self
    }

    pub fn call_count(&self) -> u64 {
        self.calls.load(Ordering::SeqCst)
    }
}

impl ChatBackend for MockChat {
    fn complete(&self, request: &ChatRequest) -> Result<ChatResponse, GatewayError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        for rule in &self.rules {
            let reply = match rule {
                MockRule::Exact {
                    system_prompt,
                    user_prompt,
                    reply,
                } if *system_prompt == request.system_prompt
                    && *user_prompt == request.user_prompt =>
                {
                    Some(reply)
                }
                MockRule::UserPrefix { prefix, reply }
                    if request.user_prompt.starts_with(prefix.as_str()) =>
                {
                    Some(reply)
                }
                MockRule::UserContains { needle, reply }
                    if request.user_prompt.contains(needle.as_str()) =>
                {
                    Some(reply)
                }
                _ => None,
            };
            if let Some(reply) = reply {
                return Ok(ChatResponse::text(reply));
            }
        }
        Err(GatewayError::MockMiss {
            hash: request_hash(&request.system_prompt, &request.user_prompt),
        })
    }
}

/// One recorded exchange in a cassette file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CassetteEntry {
    pub request_hash: String,
    pub request: ChatRequest,
    pub response: ChatResponse,
}

/// Replays responses from a recorded cassette, keyed by request hash.
pub struct ReplayChat {
    responses: HashMap<String, ChatResponse>,
}

impl ReplayChat {
    pub fn load(path: &Path) -> Result<Self, GatewayError> {
        let file = File::open(path).map_err(|e| {
            GatewayError::Cassette(format!("failed to open {}: {e}", path.display()))
        })?;
        let reader = BufReader::new(file);
        let mut responses = HashMap::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| GatewayError::Cassette(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let entry: CassetteEntry = serde_json::from_str(&line).map_err(|e| {
                GatewayError::Cassette(format!("line {}: {e}", i + 1))
            })?;
            responses.insert(entry.request_hash, entry.response);
        }
        Ok(ReplayChat { responses })
    }

    pub fn len(&self) -> usize {
        self.responses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.responses.is_empty()
    }
}

impl ChatBackend for ReplayChat {
    fn complete(&self, request: &ChatRequest) -> Result<ChatResponse, GatewayError> {
        let hash = request_hash(&request.system_prompt, &request.user_prompt);
        self.responses
            .get(&hash)
            .cloned()
            .ok_or(GatewayError::MockMiss { hash })
    }
}

#[derive(Serialize)]
struct ChatHttpMessage<'a> {
    role: &'static str,
    content: &'a str,
}

#[derive(Serialize)]
struct ChatHttpRequest<'a> {
    model: &'a str,
    messages: Vec<ChatHttpMessage<'a>>,
    temperature: f64,
    max_tokens: u32,
}

#[derive(Deserialize)]
struct ChatHttpResponse {
    choices: Vec<ChatHttpChoice>,
    #[serde(default)]
    usage: Option<ChatHttpUsage>,
}

#[derive(Deserialize)]
struct ChatHttpChoice {
    message: ChatHttpContent,
}

#[derive(Deserialize)]
struct ChatHttpContent {
    content: String,
}

#[derive(Deserialize)]
struct ChatHttpUsage {
    #[serde(default)]
    prompt_tokens: u64,
    #[serde(default)]
    completion_tokens: u64,
}

#[derive(Debug, Clone)]
pub struct HttpChatConfig {
    /// Full endpoint URL, e.g. `https://host/v1/chat/completions`.
    pub url: String,
    pub model: String,
    /// Bearer token; read from `GLOBALRAG_API_KEY` by `from_env`.
    pub bearer_token: Option<String>,
    pub timeout: Duration,
}

/// Remote backend speaking the common `/v1/chat/completions` JSON shape.
pub struct HttpChat {
    config: HttpChatConfig,
    agent: ureq::Agent,
}

impl HttpChat {
    pub fn new(config: HttpChatConfig) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(config.timeout))
            .build()
            .into();
        HttpChat { config, agent }
    }

    pub fn from_env(url: &str, model: &str) -> Self {
        HttpChat::new(HttpChatConfig {
            url: url.to_string(),
            model: model.to_string(),
            bearer_token: std::env::var(API_KEY_ENV).ok(),
            timeout: Duration::from_secs(60),
        })
    }
}

impl ChatBackend for HttpChat {
    fn complete(&self, request: &ChatRequest) -> Result<ChatResponse, GatewayError> {
        let mut messages = Vec::with_capacity(2);
        if !request.system_prompt.is_empty() {
            messages.push(ChatHttpMessage {
                role: "system",
                content: &request.system_prompt,
            });
        }
        messages.push(ChatHttpMessage {
            role: "user",
            content: &request.user_prompt,
        });
        let body = ChatHttpRequest {
            model: &self.config.model,
            messages,
            temperature: request.temperature,
            max_tokens: request.max_tokens,
        };
        let mut http_request = self.agent.post(&self.config.url);
        if let Some(token) = &self.config.bearer_token {
            http_request = http_request.header("Authorization", &format!("Bearer {token}"));
        }
        let mut response = match http_request.send_json(&body) {
            Ok(r) => r,
            Err(ureq::Error::StatusCode(code)) if (400..500).contains(&code) => {
                return Err(GatewayError::Protocol(format!(
                    "backend rejected request with status {code}"
                )));
            }
            Err(e) => {
                return Err(GatewayError::Transport {
                    attempts: 1,
                    message: e.to_string(),
                });
            }
        };
        let parsed: ChatHttpResponse = response
            .body_mut()
            .read_json()
            .map_err(|e| GatewayError::Protocol(e.to_string()))?;
        let choice = parsed
            .choices
            .into_iter()
            .next()
            .ok_or_else(|| GatewayError::Protocol("response has no choices".to_string()))?;
        let usage = parsed
            .usage
            .map(|u| TokenUsage {
                prompt_tokens: u.prompt_tokens,
                completion_tokens: u.completion_tokens,
            })
            .unwrap_or_default();
        Ok(ChatResponse {
            text: choice.message.content,
            usage,
        })
    }
}

/// Counting semaphore bounding concurrent in-flight backend calls.
struct Semaphore {
    permits: Mutex<usize>,
    available: Condvar,
}

impl Semaphore {
    fn new(permits: usize) -> Self {
        Semaphore {
            permits: Mutex::new(permits),
            available: Condvar::new(),
        }
    }

    fn acquire(&self) -> SemaphoreGuard<'_> {
        let mut permits = self.permits.lock().expect("semaphore lock");
        while *permits == 0 {
            permits = self.available.wait(permits).expect("semaphore wait");
        }
        *permits -= 1;
        SemaphoreGuard { semaphore: self }
    }
}

struct SemaphoreGuard<'a> {
    semaphore: &'a Semaphore,
}

impl Drop for SemaphoreGuard<'_> {
    fn drop(&mut self) {
        let mut permits = self.semaphore.permits.lock().expect("semaphore lock");
        *permits += 1;
        self.semaphore.available.notify_one();
    }
}

#[derive(Debug, Clone)]
pub struct RetryPolicy {
    /// Additional attempts after the first failure.
    pub max_retries: u32,
    /// First backoff delay; doubles on each subsequent retry.
    pub base_backoff: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            max_retries: 2,
            base_backoff: Duration::from_millis(50),
        }
    }
}

/// Wraps a backend with retry, an in-flight bound, and optional recording
/// of every successful exchange to a cassette file.
pub struct Gateway {
    backend: Box<dyn ChatBackend>,
    retry: RetryPolicy,
    limiter: Option<Semaphore>,
    recorder: Option<Mutex<File>>,
}

impl Gateway {
    pub fn new(backend: Box<dyn ChatBackend>) -> Self {
        Gateway {
            backend,
            retry: RetryPolicy::default(),
            limiter: None,
            recorder: None,
        }
    }

    pub fn with_retry(mut self, retry: RetryPolicy) -> Self {
        self.retry = retry;
        self
    }

    /// Bounds the number of concurrent backend calls.
    pub fn with_max_in_flight(mut self, limit: usize) -> Self {
        self.limiter = Some(Semaphore::new(limit.max(1)));
        self
    }

    /// Records every successful exchange to a cassette JSONL file.
    pub fn with_recorder(mut self, path: &Path) -> Result<Self, GatewayError> {
        let file = File::create(path).map_err(|e| {
            GatewayError::Cassette(format!("failed to create {}: {e}", path.display()))
        })?;
        self.recorder = Some(Mutex::new(file));
        Ok(self)
    }

    pub fn complete(&self, request: &ChatRequest) -> Result<ChatResponse, GatewayError> {
        let _permit = self.limiter.as_ref().map(Semaphore::acquire);
        let mut attempt: u32 = 0;
        loop {
            match self.backend.complete(request) {
                Ok(response) => {
                    self.record(request, &response)?;
                    return Ok(response);
                }
                Err(e) if e.is_transient() && attempt < self.retry.max_retries => {
                    attempt += 1;
                    let delay = self.retry.base_backoff * 2u32.pow(attempt - 1);
                    log::warn!(
                        "chat call failed transiently (attempt {attempt} of {}), retrying in {delay:?}: {e}",
                        self.retry.max_retries
                    );
                    std::thread::sleep(delay);
                }
                Err(GatewayError::Transport { message, .. }) => {
                    return Err(GatewayError::Transport {
                        attempts: attempt + 1,
                        message,
                    });
                }
                Err(e) => return Err(e),
            }
        }
    }

    fn record(&self, request: &ChatRequest, response: &ChatResponse) -> Result<(), GatewayError> {
        let Some(recorder) = &self.recorder else {
            return Ok(());
        };
        let entry = CassetteEntry {
            request_hash: request_hash(&request.system_prompt, &request.user_prompt),
            request: request.clone(),
            response: response.clone(),
        };
        let mut line = serde_json::to_string(&entry).expect("cassette entry serializes");
        line.push('\n');
        let mut file = recorder.lock().expect("recorder lock");
        file.write_all(line.as_bytes())
            .map_err(|e| GatewayError::Cassette(e.to_string()))
    }
}
