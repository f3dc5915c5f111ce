"""Job-control service: design endpoints plus per-device plot/scan queues.

Design calls (hadamard, pairs, canvas, prediction maps) are pure and
touch no device.  Each device owns one virtual plotter session and a
worker thread that executes submitted jobs strictly in order, streaming
program lines through the session and updating job progress per pulse.
Scan results are sign-classified patterns (+1 above +0.5, -1 below
-0.5, else demagnetized) with raw readings kept in metadata.
"""

from __future__ import annotations

import json
import queue
import threading
import time
import uuid
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from fastapi import Body, FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from . import pattern_io
from .interaction import interaction_map
from .pairs import canvas_block_ncc, canvas_compile, generate_pair_set
from .patterns import PixelGrid, sylvester_hadamard
from .plotter import PlotterSession, handle_command, new_session, snapshot_sheet
from .toolpath import compile_plot, compile_scan, emit_program, estimate_job

SCAN_CLASSIFY_THRESHOLD = 0.5


def classify_reading(value: float) -> float:
    if value > SCAN_CLASSIFY_THRESHOLD:
        return 1.0
    if value < -SCAN_CLASSIFY_THRESHOLD:
        return -1.0
    return 0.0


@dataclass
class Job:
    id: str
    kind: str                      # "plot" | "scan"
    state: str = "queued"          # queued -> running -> done | failed
    pixels_total: int = 0
    pixels_done: int = 0
    result: Optional[dict] = None
    error: Optional[str] = None
    created_at: float = field(default_factory=time.time)
    started_at: Optional[float] = None
    finished_at: Optional[float] = None

    @property
    def progress(self) -> float:
        if self.pixels_total <= 0:
            return 1.0 if self.state in ("done", "failed") else 0.0
        return self.pixels_done / self.pixels_total

    def to_doc(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "state": self.state,
            "pixels_total": self.pixels_total,
            "pixels_done": self.pixels_done,
            "progress": self.progress,
            "result": self.result,
            "error": self.error,
            "created_at": self.created_at,
            "started_at": self.started_at,
            "finished_at": self.finished_at,
        }


class DeviceHandle:
    """One virtual device: a session plus a sequential job executor."""

    def __init__(self, device_id: str, session: PlotterSession, throttle_s: float = 0.0):
        self.id = device_id
        self.session = session
        self.throttle_s = throttle_s
        self.command_log: list[tuple] = []   # (job_id, line, response)
        self._queue: queue.Queue = queue.Queue()
        self._worker = threading.Thread(
            target=self._run_loop, name=f"device-{device_id}", daemon=True
        )
        self._worker.start()

    def enqueue(self, job: Job, work):
        self._queue.put((job, work))

    def _run_loop(self):
        while True:
            job, work = self._queue.get()
            job.state = "running"
            job.started_at = time.time()
            try:
                job.result = work(job)
                job.state = "done"
            except Exception as exc:
                job.error = str(exc)
                job.state = "failed"
            finally:
                job.finished_at = time.time()
                self._queue.task_done()

    def stream(self, job: Job, program: str, on_line=None):
        for line in program.splitlines():
            if not line.strip():
                continue
            response = handle_command(self.session, line)
            self.command_log.append((job.id, line, response))
            if response.startswith("err"):
                raise RuntimeError(f"device rejected {line!r}: {response}")
            if on_line is not None:
                on_line(line, response)
            if self.throttle_s > 0:
                time.sleep(self.throttle_s)

    def wait_idle(self):
        self._queue.join()


class ControlService:
    def __init__(self):
        self.devices: dict[str, DeviceHandle] = {}
        self.jobs: dict[str, Job] = {}
        self._lock = threading.Lock()

    def add_device(
        self,
        device_id: str,
        rows: int = 16,
        cols: int = 16,
        sigma: float = 0.18,
        seed: int = 0,
        throttle_s: float = 0.0,
    ) -> DeviceHandle:
        handle = DeviceHandle(device_id, new_session(rows, cols, sigma=sigma, seed=seed), throttle_s)
        with self._lock:
            self.devices[device_id] = handle
        return handle

    def device(self, device_id: str) -> DeviceHandle:
        try:
            return self.devices[device_id]
        except KeyError:
            raise KeyError(f"unknown device {device_id!r}") from None

    def job(self, job_id: str) -> Job:
        try:
            return self.jobs[job_id]
        except KeyError:
            raise KeyError(f"unknown job {job_id!r}") from None

    def _new_job(self, kind: str, total: int) -> Job:
        job = Job(id=uuid.uuid4().hex[:12], kind=kind, pixels_total=total)
        with self._lock:
            self.jobs[job.id] = job
        return job

    def submit_plot(self, device_id: str, pattern_doc: dict) -> Job:
        device = self.device(device_id)
        grid, _ = pattern_io.grid_from_doc(pattern_doc)   # validation before queueing
        sheet = device.session.sheet
        if grid.rows > sheet.rows or grid.cols > sheet.cols:
            raise ValueError(
                f"pattern {grid.rows}x{grid.cols} exceeds sheet {sheet.rows}x{sheet.cols}"
            )
        path = compile_plot(grid, sheet=sheet.model)
        program = emit_program(path)
        estimate = estimate_job(path)
        job = self._new_job("plot", path.pixels_written)

        def work(job: Job) -> dict:
            def on_line(line, _resp):
                if line.startswith("MAG ") and not line.startswith("MAG OFF"):
                    job.pixels_done += 1
            device.stream(job, program, on_line)
            return {
                "pixels_written": estimate.pixels_written,
                "pixels_skipped": estimate.pixels_skipped,
                "duration_s": estimate.duration_s,
                "energy_j": estimate.energy_j,
            }

        device.enqueue(job, work)
        return job

    def submit_scan(self, device_id: str, rows: int, cols: int) -> Job:
        device = self.device(device_id)
        if rows < 1 or cols < 1:
            raise ValueError(f"scan size must be >= 1x1, got {rows}x{cols}")
        sheet = device.session.sheet
        if rows > sheet.rows or cols > sheet.cols:
            raise ValueError(f"scan {rows}x{cols} exceeds sheet {sheet.rows}x{sheet.cols}")
        program = emit_program(compile_scan(rows, cols))
        job = self._new_job("scan", rows * cols)

        def work(job: Job) -> dict:
            readings = np.zeros((rows, cols))

            def on_line(line, resp):
                if line.startswith("HALL?"):
                    r, c = (int(v) for v in line.split()[1].split(","))
                    readings[r, c] = float(resp.split()[1])
                    job.pixels_done += 1

            device.stream(job, program, on_line)
            values = np.vectorize(classify_reading)(readings)
            grid = PixelGrid(values)
            metadata = {
                "source": f"scan:{device.id}",
                "raw_readings": json.dumps([[round(float(v), 6) for v in row] for row in readings]),
            }
            return {"pattern": pattern_io.grid_to_doc(grid, metadata)}

        device.enqueue(job, work)
        return job

    def sheet_doc(self, device_id: str) -> dict:
        device = self.device(device_id)
        return pattern_io.grid_to_doc(snapshot_sheet(device.session), {"source": f"sheet:{device_id}"})

    def dump_jobs(self, path):
        with self._lock:
            docs = [j.to_doc() for j in self.jobs.values()]
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(docs, fh, indent=2, sort_keys=True)


class HadamardRequest(BaseModel):
    order: int
    name: str = ""


class PairsRequest(BaseModel):
    k: int
    order: int = 8
    candidates: int = 64
    mode: str = "attract"
    seed: int = 0


class CanvasRequest(BaseModel):
    token: dict
    assignments: list


class PredictRequest(BaseModel):
    a: dict
    b: dict
    normalization: str = "overlap"


class PlotRequest(BaseModel):
    pattern: dict


class ScanRequest(BaseModel):
    rows: int
    cols: int


def create_app(
    service: Optional[ControlService] = None,
    default_device: str = "dev0",
    rows: int = 16,
    cols: int = 16,
    sigma: float = 0.18,
    seed: int = 0,
    throttle_s: float = 0.0,
) -> FastAPI:
    if service is None:
        service = ControlService()
        service.add_device(default_device, rows, cols, sigma=sigma, seed=seed, throttle_s=throttle_s)

    app = FastAPI(title="magpix control service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    app.state.service = service

    def _err(exc: Exception) -> HTTPException:
        return HTTPException(status_code=422, detail=str(exc))

    @app.post("/patterns/validate")
    def validate_pattern(doc: dict = Body(...)):
        try:
            grid, metadata = pattern_io.grid_from_doc(doc)
        except ValueError as exc:
            raise _err(exc)
        return {"ok": True, "rows": grid.rows, "cols": grid.cols, "metadata": metadata}

    @app.post("/design/hadamard")
    def design_hadamard(req: HadamardRequest):
        try:
            grid = sylvester_hadamard(req.order)
        except ValueError as exc:
            raise _err(exc)
        meta = {"name": req.name} if req.name else {}
        return pattern_io.grid_to_doc(grid, meta)

    @app.post("/design/pairs")
    def design_pairs(req: PairsRequest):
        try:
            pair_set = generate_pair_set(req.k, req.order, req.candidates, req.mode, req.seed)
        except ValueError as exc:
            raise _err(exc)
        return {
            "pairs": [
                {
                    "key": pattern_io.grid_to_doc(key, {"pair": str(i), "role": "key"}),
                    "lock": pattern_io.grid_to_doc(lock, {"pair": str(i), "role": "lock"}),
                }
                for i, (key, lock) in enumerate(pair_set.pairs)
            ],
            "score": pair_set.score,
            "seed": pair_set.seed,
            "mode": pair_set.mode,
            "permutations": [list(p) for p in pair_set.permutations],
            "stats": pair_set.stats,
        }

    @app.post("/design/canvas")
    def design_canvas(req: CanvasRequest):
        try:
            token, _ = pattern_io.grid_from_doc(req.token)
            layout = canvas_compile(token, req.assignments)
        except ValueError as exc:
            raise _err(exc)
        blocks = [
            [
                {
                    "assignment": layout.assignments[r][c].value,
                    "ncc": canvas_block_ncc(layout, r, c),
                }
                for c in range(layout.meta_cols)
            ]
            for r in range(layout.meta_rows)
        ]
        return {"canvas": pattern_io.grid_to_doc(layout.canvas), "blocks": blocks}

    @app.post("/predict/map")
    def predict_map(req: PredictRequest):
        try:
            a, _ = pattern_io.grid_from_doc(req.a)
            b, _ = pattern_io.grid_from_doc(req.b)
            imap = interaction_map(a, b, req.normalization)
        except ValueError as exc:
            raise _err(exc)
        return imap.to_doc()

    @app.post("/devices/{device_id}/plot")
    def device_plot(device_id: str, req: PlotRequest):
        try:
            job = service.submit_plot(device_id, req.pattern)
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except ValueError as exc:
            raise _err(exc)
        return job.to_doc()

    @app.post("/devices/{device_id}/scan")
    def device_scan(device_id: str, req: ScanRequest):
        try:
            job = service.submit_scan(device_id, req.rows, req.cols)
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except ValueError as exc:
            raise _err(exc)
        return job.to_doc()

    @app.get("/jobs/{job_id}")
    def job_status(job_id: str):
        try:
            return service.job(job_id).to_doc()
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=str(exc))

    @app.get("/devices/{device_id}/sheet")
    def device_sheet(device_id: str):
        try:
            return service.sheet_doc(device_id)
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=str(exc))

    return app
