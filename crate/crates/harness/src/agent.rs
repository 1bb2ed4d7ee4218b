//! Agent backends: who answers a wire request.
//!
//! Built-in agents (`reference`, `null`) run in-process. External agents
//! attach either as a child process speaking the protocol on
//! stdin/stdout (`cmd:<command>`) or over a TCP socket (`sock:<addr>`).

use crate::protocol::{encode_line, parse_request, parse_response, WireRequest, WireResponse};
use anyhow::{anyhow, bail, Context, Result};
use stabbench_core::pauli::PauliString;
use stabbench_core::score::Task;
use stabbench_core::synth::synthesize_prep;
use std::collections::HashMap;
use std::io::{BufRead, BufReader, Write};
use std::net::{TcpStream, ToSocketAddrs};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc;
use std::sync::{Arc, Mutex};
use std::time::Instant;

pub trait Agent: Send + Sync {
    /// Answer one request before `deadline`. An error here counts
    /// against the instance, not the harness.
    fn request(&self, req: &WireRequest, deadline: Instant) -> Result<WireResponse>;
    fn describe(&self) -> String;
}

/// Parse an `--agent` argument.
pub fn agent_from_arg(arg: &str) -> Result<Arc<dyn Agent>> {
    if arg == "reference" {
        return Ok(Arc::new(ReferenceAgent));
    }
    if arg == "null" {
        return Ok(Arc::new(NullAgent));
    }
    if let Some(cmd) = arg.strip_prefix("cmd:") {
        return Ok(Arc::new(CmdAgent::spawn(cmd)?));
    }
    if let Some(addr) = arg.strip_prefix("sock:") {
        return Ok(Arc::new(SockAgent::new(addr)));
    }
    bail!("unknown agent '{arg}' (expected reference, null, cmd:<command>, or sock:<addr>)");
}

/// Synthesizes a preparation circuit from the request's generators.
/// That answers B1 outright and beats the inflated B2 baseline; it has
/// no flag construction, so it declines B3.
pub struct ReferenceAgent;

/// Computes a reference response for a request. Shared by the in-process
/// agent and the stdio `agent` subcommand.
pub fn reference_response(req: &WireRequest) -> Result<WireResponse> {
    if req.task == Task::B3 {
        return Ok(WireResponse::give_up(&req.request_id));
    }
    let mut gens = Vec::new();
    for text in &req.inputs.generators {
        gens.push(PauliString::parse(text, req.inputs.num_qubits)?);
    }
    let prep = synthesize_prep(&gens)?;
    Ok(WireResponse::circuit(
        &req.request_id,
        stabbench_core::circuit::emit_circuit(&prep),
    ))
}

impl Agent for ReferenceAgent {
    fn request(&self, req: &WireRequest, _deadline: Instant) -> Result<WireResponse> {
        reference_response(req)
    }

    fn describe(&self) -> String {
        "reference".into()
    }
}

/// Always submits an empty circuit. Useful as a floor: it should score
/// zero on every task.
pub struct NullAgent;

impl Agent for NullAgent {
    fn request(&self, req: &WireRequest, _deadline: Instant) -> Result<WireResponse> {
        Ok(WireResponse::circuit(&req.request_id, String::new()))
    }

    fn describe(&self) -> String {
        "null".into()
    }
}

/// One long-lived child process; requests are written to its stdin and
/// responses read from its stdout by a dedicated reader thread that
/// routes lines back by request id. Responses to ids nobody waits for
/// (a late answer after a timeout) are discarded.
pub struct CmdAgent {
    command: String,
    stdin: Mutex<ChildStdin>,
    pending: Arc<Mutex<HashMap<String, mpsc::Sender<WireResponse>>>>,
    child: Mutex<Child>,
}

impl CmdAgent {
    /// `command` is split on whitespace; the first token is the program.
    pub fn spawn(command: &str) -> Result<CmdAgent> {
        let mut parts = command.split_whitespace();
        let program = parts
            .next()
            .ok_or_else(|| anyhow!("empty agent command"))?;
        let mut child = Command::new(program)
            .args(parts)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()
            .with_context(|| format!("spawning agent command '{command}'"))?;
        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = child.stdout.take().expect("piped stdout");
        let pending: Arc<Mutex<HashMap<String, mpsc::Sender<WireResponse>>>> =
            Arc::new(Mutex::new(HashMap::new()));
        let routes = Arc::clone(&pending);
        std::thread::spawn(move || {
            let reader = BufReader::new(stdout);
            for line in reader.lines() {
                let Ok(line) = line else { break };
                if line.trim().is_empty() {
                    continue;
                }
                let Ok(resp) = parse_response(&line) else {
                    continue;
                };
                let tx = routes.lock().unwrap().remove(&resp.request_id);
                if let Some(tx) = tx {
                    let _ = tx.send(resp);
                }
            }
            // Child closed stdout: drop every waiter so requests fail
            // fast instead of running out their deadlines.
            routes.lock().unwrap().clear();
        });
        Ok(CmdAgent {
            command: command.to_string(),
            stdin: Mutex::new(stdin),
            pending,
            child: Mutex::new(child),
        })
    }
}

impl Agent for CmdAgent {
    fn request(&self, req: &WireRequest, deadline: Instant) -> Result<WireResponse> {
        let (tx, rx) = mpsc::channel();
        self.pending
            .lock()
            .unwrap()
            .insert(req.request_id.clone(), tx);
        {
            let mut stdin = self.stdin.lock().unwrap();
            let write = stdin
                .write_all(encode_line(req).as_bytes())
                .and_then(|_| stdin.flush());
            if let Err(e) = write {
                self.pending.lock().unwrap().remove(&req.request_id);
                return Err(e).context("writing to agent stdin");
            }
        }
        let remaining = deadline.saturating_duration_since(Instant::now());
        match rx.recv_timeout(remaining) {
            Ok(resp) => Ok(resp),
            Err(e) => {
                self.pending.lock().unwrap().remove(&req.request_id);
                bail!("agent gave no answer for request {}: {e}", req.request_id);
            }
        }
    }

    fn describe(&self) -> String {
        format!("cmd:{}", self.command)
    }
}

impl Drop for CmdAgent {
    fn drop(&mut self) {
        let mut child = self.child.lock().unwrap();
        let _ = child.kill();
        let _ = child.wait();
    }
}

/// One TCP connection per request: connect, send the request line, read
/// lines until the matching response arrives or the deadline passes.
pub struct SockAgent {
    addr: String,
}

impl SockAgent {
    pub fn new(addr: &str) -> SockAgent {
        SockAgent {
            addr: addr.to_string(),
        }
    }
}

impl Agent for SockAgent {
    fn request(&self, req: &WireRequest, deadline: Instant) -> Result<WireResponse> {
        let remaining = deadline.saturating_duration_since(Instant::now());
        let sock_addr = self
            .addr
            .to_socket_addrs()
            .with_context(|| format!("resolving {}", self.addr))?
            .next()
            .ok_or_else(|| anyhow!("{} resolves to no address", self.addr))?;
        let stream = TcpStream::connect_timeout(&sock_addr, remaining)
            .with_context(|| format!("connecting to {}", self.addr))?;
        let mut writer = stream.try_clone()?;
        writer.write_all(encode_line(req).as_bytes())?;
        writer.flush()?;
        let mut reader = BufReader::new(stream);
        loop {
            let remaining = deadline.saturating_duration_since(Instant::now());
            if remaining.is_zero() {
                bail!("agent at {} missed the deadline", self.addr);
            }
            reader.get_ref().set_read_timeout(Some(remaining))?;
            let mut line = String::new();
            let n = reader
                .read_line(&mut line)
                .with_context(|| format!("reading from {}", self.addr))?;
            if n == 0 {
                bail!("agent at {} closed the connection", self.addr);
            }
            if line.trim().is_empty() {
                continue;
            }
            let resp = parse_response(&line).map_err(|e| anyhow!(e))?;
            if resp.request_id == req.request_id {
                return Ok(resp);
            }
            // A stale id is not this request's answer; keep reading.
        }
    }

    fn describe(&self) -> String {
        format!("sock:{}", self.addr)
    }
}

/// Serve requests on stdin with a built-in agent; the `agent`
/// subcommand's body, and the other end of `cmd:` self-play.
pub fn serve_stdio(kind: &str) -> Result<()> {
    let stdin = std::io::stdin();
    let mut stdout = std::io::stdout().lock();
    for line in stdin.lock().lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let req = parse_request(&line).map_err(|e| anyhow!(e))?;
        let resp = match kind {
            "reference" => reference_response(&req)
                .unwrap_or_else(|_| WireResponse::give_up(&req.request_id)),
            "null" => WireResponse::circuit(&req.request_id, String::new()),
            other => bail!("unknown stdio agent kind '{other}'"),
        };
        stdout.write_all(encode_line(&resp).as_bytes())?;
        stdout.flush()?;
    }
    Ok(())
}
