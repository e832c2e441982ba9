import random
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Dict, List, Union

from models.reports import RunManifest
from settings import VERSION, logger

PathLike = Union[str, Path]


def id_generator(prefix: str, n: int) -> Callable[[], str]:
    """
    Generates a callable that returns run ids with format {prefix}_{n_chars_random}.

    Random characters exclude visually confusing characters (0, O, 1, l, I).
    """
    safe_chars = '23456789abcdefghjkmnpqrstuvwxyz'

    def generate_id() -> str:
        random_part = ''.join(random.choices(safe_chars, k=n))
        return f"{prefix}_{random_part}"

    return generate_id


new_run_id = id_generator("run", 10)


def build_manifest(command: str, parameters: Dict[str, object], started_at: datetime,
                   outputs: List[Path]) -> RunManifest:
    finished = datetime.now(timezone.utc)
    return RunManifest(
        run_id=new_run_id(),
        command=command,
        parameters=parameters,
        version=VERSION,
        started_at=started_at,
        wall_time=(finished - started_at).total_seconds(),
        outputs=[str(path) for path in outputs]
    )


def write_manifest(manifest: RunManifest, out_dir: PathLike) -> Path:
    """Write <command>-<run_id>-manifest.json into the output directory, one file per run."""
    path = Path(out_dir) / f"{manifest.command}-{manifest.run_id}-manifest.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(manifest.model_dump_json(indent=2))
    logger.info("Wrote run manifest", extra={"run_id": manifest.run_id, "path": str(path)})
    return path
