"""Operator command line: register, verify, inspect, serve, and analysis.

Targets are either a local vault file (the default) or a running service
URL; both paths share one pipeline, so the decision for a given stroke file
is identical. Exit codes: 0 ok or authenticated, 2 rejected, 3 input or
configuration error, 4 transport failure, 5 record corruption.
"""

from __future__ import annotations

import random
from dataclasses import replace
from typing import Sequence

import click
import httpx

from .analysis import (
    exhaustive_guess_far,
    far_sweep,
    format_far_report,
    format_space_report,
    password_space,
    random_bitmap,
    random_guess_far,
    sweep_csv_lines,
)
from .config import SystemConfig
from .encoding import ExtendedMatrix, decode_color, decode_record
from .envelope import load_vault_key
from .errors import (
    ConfigError,
    DuplicateUserError,
    InputError,
    RecordCorruptionError,
    StorageError,
    SuisError,
    TransportError,
    UserNotFoundError,
)
from .flows import SignatureTooSmallError, register_user, verify_user
from .grid import GridSpec
from .matching import MatchPolicy
from .strokefile import StrokeDocument, load_stroke_file
from .vault import Vault

EXIT_OK = 0
EXIT_REJECTED = 2
EXIT_INPUT = 3
EXIT_TRANSPORT = 4
EXIT_CORRUPTION = 5

REQUEST_TIMEOUT = 10.0


def _parse_grid(value: str) -> tuple[int, int]:
    """Parse RxC, e.g. 5x5 or 3x4, into (rows, cols)."""
    parts = value.lower().split("x")
    try:
        rows, cols = (int(p) for p in parts)
    except ValueError as exc:
        raise InputError(f"--grid expects RxC, e.g. 5x5, got {value!r}") from exc
    if rows < 1 or cols < 1:
        raise InputError("--grid dimensions must be positive")
    return rows, cols


def _is_url(target: str) -> bool:
    return target.startswith("http://") or target.startswith("https://")


def _local_vault(config_path: str | None, vault_path: str | None) -> Vault:
    config = SystemConfig.load(config_path) if config_path else SystemConfig()
    if vault_path:
        config = config.with_vault_path(vault_path)
    return Vault(config.vault_path, load_vault_key(), config)


def _request_body(username: str, doc: StrokeDocument, color_id: int) -> dict:
    return {
        "username": username,
        "strokes": [
            [{"x": p.x, "y": p.y} for p in stroke.points] for stroke in doc.strokes
        ],
        "color_id": color_id,
    }


def _post(url: str, path: str, body: dict) -> httpx.Response:
    try:
        return httpx.post(
            url.rstrip("/") + path, json=body, timeout=REQUEST_TIMEOUT
        )
    except httpx.HTTPError as exc:
        raise TransportError(f"cannot reach {url}: {exc}") from exc


def _body_detail(resp: httpx.Response) -> str:
    try:
        data = resp.json()
    except ValueError:
        return resp.text[:200]
    if isinstance(data, dict):
        for field in ("hint", "error", "detail"):
            if field in data:
                return str(data[field])
    return str(data)[:200]


def render_matrix(matrix: ExtendedMatrix) -> str:
    """ASCII view of a decoded record, drawing and extras regions marked.

    Drawing cells print as '#' (active) or '.' (empty); extras cells print
    their bit as '1' or '0', so set metadata slots stand out.
    """
    spec = matrix.spec
    width = len(str(spec.extended_cols))
    lines = [
        "     " + " ".join(f"{col:>{width}}" for col in range(1, spec.extended_cols + 1))
    ]
    for row in range(1, spec.extended_rows + 1):
        cells = []
        for col in range(1, spec.extended_cols + 1):
            bit = matrix.value_at(col, row)
            if spec.in_drawing_region(col, row):
                symbol = "#" if bit else "."
            else:
                symbol = "1" if bit else "0"
            cells.append(f"{symbol:>{width}}")
        lines.append(f"{row:>3}  " + " ".join(cells))
    lines.append(
        f"drawing region (cols 1-{spec.drawing_cols}, rows 1-{spec.drawing_rows}): "
        "'#' active, '.' empty"
    )
    lines.append("extras region (all other cells): '1' set, '0' clear")
    return "\n".join(lines)


@click.group(invoke_without_command=True)
@click.pass_context
def cli(ctx: click.Context) -> None:
    """Graphical signature authentication tools."""
    if ctx.invoked_subcommand is None:
        click.echo(ctx.get_help())
        ctx.exit(EXIT_OK)


@cli.command()
@click.argument("stroke_file", type=click.Path())
@click.option("--user", "username", required=True, help="username to register")
@click.option("--color", type=int, default=None, help="override the file's color_id")
@click.option("--target", default="local", help="'local' or a service URL")
@click.option("--vault", "vault_path", default=None, help="local vault file")
@click.option("--config", "config_path", default=None, help="configuration JSON file")
def register(
    stroke_file: str,
    username: str,
    color: int | None,
    target: str,
    vault_path: str | None,
    config_path: str | None,
) -> int:
    """Register a signature from a stroke file."""
    doc = load_stroke_file(stroke_file)
    color_id = color if color is not None else doc.color_id
    if _is_url(target):
        resp = _post(target, "/api/v1/register", _request_body(username, doc, color_id))
        if resp.status_code == 201:
            count = resp.json().get("active_cells", "?")
            click.echo(f"registered {username!r}: {count} active cells")
            return EXIT_OK
        if resp.status_code in (400, 409, 429):
            click.echo(f"registration rejected: {_body_detail(resp)}", err=True)
            return EXIT_REJECTED
        if resp.status_code == 422:
            click.echo(f"invalid request: {_body_detail(resp)}", err=True)
            return EXIT_INPUT
        raise TransportError(f"unexpected response {resp.status_code} from {target}")
    if target != "local":
        raise InputError(f"target must be 'local' or an http(s) URL, got {target!r}")
    vault = _local_vault(config_path, vault_path)
    try:
        result = register_user(vault, username, doc.strokes, color_id)
    except (SignatureTooSmallError, DuplicateUserError) as exc:
        click.echo(f"registration rejected: {exc}", err=True)
        return EXIT_REJECTED
    click.echo(f"registered {username!r}: {result.active_cells} active cells")
    return EXIT_OK


@cli.command()
@click.argument("stroke_file", type=click.Path())
@click.option("--user", "username", required=True, help="username to verify")
@click.option("--color", type=int, default=None, help="override the file's color_id")
@click.option("--target", default="local", help="'local' or a service URL")
@click.option("--vault", "vault_path", default=None, help="local vault file")
@click.option("--config", "config_path", default=None, help="configuration JSON file")
def verify(
    stroke_file: str,
    username: str,
    color: int | None,
    target: str,
    vault_path: str | None,
    config_path: str | None,
) -> int:
    """Verify a signature from a stroke file; exit 0 iff authenticated."""
    doc = load_stroke_file(stroke_file)
    color_id = color if color is not None else doc.color_id
    if _is_url(target):
        resp = _post(target, "/api/v1/verify", _request_body(username, doc, color_id))
        if resp.status_code == 200:
            if resp.json().get("authenticated") is True:
                click.echo("authenticated")
                return EXIT_OK
            click.echo("rejected", err=True)
            return EXIT_REJECTED
        if resp.status_code == 429:
            click.echo(f"rejected: {_body_detail(resp)}", err=True)
            return EXIT_REJECTED
        if resp.status_code == 422:
            click.echo(f"invalid request: {_body_detail(resp)}", err=True)
            return EXIT_INPUT
        raise TransportError(f"unexpected response {resp.status_code} from {target}")
    if target != "local":
        raise InputError(f"target must be 'local' or an http(s) URL, got {target!r}")
    vault = _local_vault(config_path, vault_path)
    if verify_user(vault, username, doc.strokes, color_id):
        click.echo("authenticated")
        return EXIT_OK
    click.echo("rejected", err=True)
    return EXIT_REJECTED


@cli.command()
@click.option("--user", "username", required=True, help="username to inspect")
@click.option("--decrypt", is_flag=True, help="decode and print the stored matrix")
@click.option("--vault", "vault_path", default=None, help="local vault file")
@click.option("--config", "config_path", default=None, help="configuration JSON file")
def inspect(
    username: str,
    decrypt: bool,
    vault_path: str | None,
    config_path: str | None,
) -> int:
    """Print a stored record's metadata; --decrypt also prints the matrix."""
    vault = _local_vault(config_path, vault_path)
    try:
        profile = vault.get_profile(username)
        env = vault.get_envelope(username)
    except UserNotFoundError as exc:
        raise InputError(str(exc)) from exc
    click.echo(f"username   : {profile.username}")
    click.echo(f"technique  : {profile.technique}")
    click.echo(f"config id  : {profile.spec_ref}")
    click.echo(f"created at : {profile.created_at}")
    click.echo(f"updated at : {profile.updated_at}")
    click.echo(
        f"envelope   : version {env.version}, nonce {len(env.nonce)} bytes, "
        f"ciphertext {len(env.ciphertext)} bytes, tag {len(env.auth_tag)} bytes"
    )
    if not decrypt:
        return EXIT_OK
    matrix, technique = vault.get_signature(username)
    decoded = decode_record(matrix, vault.config.layout)
    palette = vault.config.palette
    color_id = decode_color(decoded.stored_color, palette.size, technique)
    click.echo("")
    click.echo(render_matrix(matrix))
    click.echo("")
    click.echo(f"stored color value : {decoded.stored_color}")
    click.echo(f"selected color     : {color_id} ({palette.colors[color_id - 1].name})")
    click.echo(f"storing technique  : {decoded.technique}")
    return EXIT_OK


@cli.command()
@click.option("--grid", default="7x7", help="drawing grid as RxC")
@click.option("--cells", type=int, default=None, help="cell count, overrides --grid")
@click.option("--colors", type=int, default=8, help="palette size N")
@click.option("--techniques", type=int, default=4, help="technique count T")
def space(grid: str, cells: int | None, colors: int, techniques: int) -> int:
    """Report exact credential-space sizes for a grid, palette, techniques."""
    if cells is None:
        rows, cols = _parse_grid(grid)
        cells = rows * cols
    click.echo(format_space_report(password_space(cells, colors, techniques)))
    return EXIT_OK


@cli.command()
@click.option("--grid", default="3x3", help="drawing grid as RxC")
@click.option("--theta", type=float, default=1.0, help="acceptance threshold")
@click.option("--trials", type=int, default=100_000, help="Monte Carlo trials")
@click.option("--seed", type=int, default=None, help="deterministic RNG seed")
@click.option("--exhaustive", is_flag=True, help="also enumerate every candidate")
@click.option("--sweep", "sweep_path", default=None, help="write rate-vs-theta CSV here")
@click.option("--thetas", default="0.25,0.5,0.75,1.0", help="sweep thresholds")
def far(
    grid: str,
    theta: float,
    trials: int,
    seed: int | None,
    exhaustive: bool,
    sweep_path: str | None,
    thetas: str,
) -> int:
    """Estimate how often uniformly random drawings are accepted."""
    rows, cols = _parse_grid(grid)
    spec = GridSpec(cols, rows, cols + 1, rows)
    rng: random.Random = random.Random(seed) if seed is not None else random.SystemRandom()
    policy = MatchPolicy(theta=theta, min_active_cells=1)
    click.echo(format_far_report(random_guess_far(spec, policy, trials, rng), spec))
    if exhaustive:
        stored = random_bitmap(spec, rng)
        accepted, total = exhaustive_guess_far(spec, policy, stored)
        click.echo(
            f"exhaustive                  : {accepted} of {total:,} candidates "
            f"accepted ({accepted / total:.6g})"
        )
    if sweep_path:
        try:
            theta_list = [float(t) for t in thetas.split(",") if t.strip()]
        except ValueError as exc:
            raise InputError(f"--thetas expects comma-separated floats: {exc}") from exc
        results = far_sweep(spec, theta_list, trials, rng)
        lines = sweep_csv_lines(results)
        if sweep_path == "-":
            for line in lines:
                click.echo(line)
        else:
            with open(sweep_path, "w") as handle:
                handle.write("\n".join(lines) + "\n")
            click.echo(f"sweep written to {sweep_path}")
    return EXIT_OK


@cli.command()
@click.option("--config", "config_path", default=None, help="configuration JSON file")
@click.option("--vault", "vault_path", default=None, help="vault database file")
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
@click.option("--static", "static_dir", default=None, help="serve this directory at /")
def serve(
    config_path: str | None,
    vault_path: str | None,
    host: str,
    port: int,
    static_dir: str | None,
) -> int:
    """Run the authentication service (requires uvicorn)."""
    try:
        import uvicorn
    except ImportError as exc:
        raise ConfigError(
            "the serve command needs uvicorn; install the [serve] extra"
        ) from exc
    from .service import create_app

    config = SystemConfig.load(config_path) if config_path else SystemConfig()
    if vault_path:
        config = config.with_vault_path(vault_path)
    if static_dir:
        config = replace(config, static_dir=static_dir)
    uvicorn.run(create_app(config), host=host, port=port)
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point mapping every failure to its documented exit code."""
    try:
        status = cli.main(args=argv, standalone_mode=False)
        return int(status or 0)
    except click.exceptions.Exit as exc:
        return int(exc.exit_code)
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return EXIT_INPUT
    except click.ClickException as exc:
        exc.show()
        return EXIT_INPUT
    except (InputError, ConfigError, StorageError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_INPUT
    except TransportError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_TRANSPORT
    except RecordCorruptionError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_CORRUPTION
    except SuisError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
