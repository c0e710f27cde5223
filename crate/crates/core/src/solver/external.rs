//! Run an external SAT solver on a DIMACS file.

use std::io::{Read, Write};
use std::path::Path;
use std::process::{Command, ExitStatus, Stdio};
use std::time::{Duration, Instant};

use super::dimacs::{emit_dimacs, parse_solver_output};
use super::{CallTimes, Deadline, SolverResult};
use crate::error::{Error, Result};
use crate::kb::CnfInstance;

const POLL: Duration = Duration::from_millis(5);

/// Invoke `path args... <file>` and read its answer. The process is killed
/// when the deadline passes.
pub fn solve_external(
    cnf: &CnfInstance,
    path: &Path,
    args: &[String],
    deadline: &Deadline,
) -> Result<(SolverResult, CallTimes)> {
    let t0 = Instant::now();
    let mut file = tempfile::Builder::new().suffix(".cnf").tempfile()?;
    file.write_all(emit_dimacs(cnf).as_bytes())?;
    file.flush()?;
    let t1 = Instant::now();
    let times = || CallTimes {
        load: t1 - t0,
        search: t1.elapsed(),
    };

    let mut cmd = Command::new(path);
    cmd.args(args).arg(file.path());
    let Some(out) = run_until(&mut cmd, deadline)? else {
        return Ok((SolverResult::Timeout(deadline.elapsed()), times()));
    };
    let out = out.stdout;
    let times = times();
    match parse_solver_output(&out, cnf.num_vars())? {
        SolverResult::Timeout(_) => Ok((SolverResult::Timeout(deadline.elapsed()), times)),
        SolverResult::Sat(m) if !cnf.satisfied_by(&m) => Err(Error::Backend(format!(
            "{} returned an assignment that violates the formula",
            path.display()
        ))),
        r => Ok((r, times)),
    }
}

/// What a finished subprocess wrote.
pub(crate) struct ProcessOutput {
    pub stdout: String,
    pub stderr: String,
    pub status: ExitStatus,
}

/// Run `cmd` to completion, or kill it once `deadline` passes and return
/// `None`.
pub(crate) fn run_until(cmd: &mut Command, deadline: &Deadline) -> Result<Option<ProcessOutput>> {
    let program = cmd.get_program().to_string_lossy().into_owned();
    let mut child = cmd
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| Error::BackendUnavailable(format!("{program}: {e}")))?;
    let drain = |mut r: Box<dyn Read + Send>| {
        std::thread::spawn(move || {
            let mut s = String::new();
            r.read_to_string(&mut s).map(|_| s)
        })
    };
    let stdout = drain(Box::new(child.stdout.take().expect("piped stdout")));
    let stderr = drain(Box::new(child.stderr.take().expect("piped stderr")));
    let status = loop {
        if let Some(status) = child.try_wait()? {
            break status;
        }
        if deadline.expired() {
            // Readers are left detached: a grandchild may still hold the pipes.
            let _ = child.kill();
            let _ = child.wait();
            return Ok(None);
        }
        std::thread::sleep(POLL);
    };
    let join = |h: std::thread::JoinHandle<std::io::Result<String>>| -> Result<String> {
        Ok(h.join()
            .map_err(|_| Error::Backend(format!("{program}: output reader panicked")))??)
    };
    Ok(Some(ProcessOutput {
        stdout: join(stdout)?,
        stderr: join(stderr)?,
        status,
    }))
}
