"""dnafec command line: a thin client over the service operations.

Every subcommand builds the same request models the HTTP API accepts and
dispatches them either in-process (the default) or to a running service
when --server is given.  Exit codes: 0 success, 2 configuration error,
1 runtime error.
"""

from __future__ import annotations

import argparse
import sys

import httpx
import numpy as np
from pydantic import ValidationError

from .channel import ChannelError
from .service import ops
from .service.schemas import (
    CapacityRequest,
    CapacityResponse,
    ChannelSpec,
    DecodeRequest,
    DecodeResponse,
    EncodeRequest,
    EncodeResponse,
    PotentialRequest,
    PotentialResponse,
    SimRequest,
    SimResponse,
)
from .sim import ConfigError

_ENDPOINTS = {
    EncodeRequest: ("/v1/encode", EncodeResponse, ops.encode),
    DecodeRequest: ("/v1/decode", DecodeResponse, ops.decode),
    CapacityRequest: ("/v1/capacity", CapacityResponse, ops.channel_capacity),
    PotentialRequest: ("/v1/potential", PotentialResponse, ops.coding_potential),
    SimRequest: ("/v1/sim", SimResponse, ops.simulate),
}


def _make_client(server: str) -> httpx.Client:
    return httpx.Client(base_url=server, timeout=None)


def _dispatch(request, server: str | None):
    path, resp_cls, local = _ENDPOINTS[type(request)]
    if server is None:
        return local(request)
    with _make_client(server) as client:
        resp = client.post(path, json=request.model_dump())
        if resp.status_code >= 400:
            detail = resp.json().get("detail", resp.text)
            raise ConfigError(f"server rejected request: {detail}")
        return resp_cls.model_validate(resp.json())


def _read_lines(path: str):
    if path == "-":
        return [ln.strip() for ln in sys.stdin if ln.strip()]
    with open(path) as fh:
        return [ln.strip() for ln in fh if ln.strip()]


def _write_lines(path: str, lines):
    text = "\n".join(lines) + ("\n" if lines else "")
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _bits_to_hex(bits: str) -> str:
    arr = np.frombuffer(bits.encode(), np.uint8) - ord("0")
    return np.packbits(arr).tobytes().hex()


def _hex_to_bits(hexstr: str, n_bits: int) -> str:
    arr = np.unpackbits(np.frombuffer(bytes.fromhex(hexstr), np.uint8))
    if arr.size < n_bits:
        raise ValueError(f"hex field holds {arr.size} bits, expected {n_bits}")
    return "".join("01"[b] for b in arr[:n_bits])


def _parse_params(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad --param-list {text!r}: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dnafec", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_server(p):
        p.add_argument("--server", default=None, help="base URL of a running dnafec service")

    p = sub.add_parser("sim", help="run a Monte Carlo channel sweep and write CSV")
    p.add_argument("--channel", required=True, choices=["nanopore", "illumina"])
    p.add_argument("--param-list", default=None, help="comma-separated channel parameters")
    p.add_argument("--info-bits", type=int, default=None)
    p.add_argument("--rate", choices=["1/2", "4/5"], default=None)
    p.add_argument("--frames", type=int, default=1000)
    p.add_argument("--max-iter", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lift-seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output CSV path")
    add_server(p)

    p = sub.add_parser("encode", help="encode bitstream lines into strand records")
    p.add_argument("--rate", choices=["1/2", "4/5"], default="1/2")
    p.add_argument("--lift-seed", type=int, default=0)
    p.add_argument("--state", choices=list("ATGC"), default="A", help="initial precoding nucleotide")
    p.add_argument("--in", dest="infile", default="-", help="input file of 0/1 lines (default stdin)")
    p.add_argument("--out", dest="outfile", default="-", help="output file (default stdout)")
    add_server(p)

    p = sub.add_parser("decode", help="decode received strand lines back to bits")
    p.add_argument("--channel", required=True, choices=["nanopore", "illumina"])
    p.add_argument("--param", type=float, required=True)
    p.add_argument("--rate", choices=["1/2", "4/5"], default="1/2")
    p.add_argument("--info-bits", type=int, required=True)
    p.add_argument("--max-iter", type=int, default=50)
    p.add_argument("--lift-seed", type=int, default=0)
    p.add_argument("--state", choices=list("ATGC"), default="A")
    p.add_argument("--in", dest="infile", default="-", help="lines of '<strand> <boundary>' or full records")
    p.add_argument("--out", dest="outfile", default="-")
    add_server(p)

    p = sub.add_parser("capacity", help="numerical channel capacity in bits per nucleotide")
    p.add_argument("--channel", required=True, choices=["nanopore", "illumina"])
    p.add_argument("--param", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    add_server(p)

    p = sub.add_parser("potential", help="overall coding potential in bits per nucleotide")
    p.add_argument("--rate", required=True, choices=["1/2", "4/5", "1"])
    add_server(p)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def _cmd_sim(args) -> int:
    req = SimRequest(
        channel=args.channel,
        params=_parse_params(args.param_list) if args.param_list else None,
        info_bits=args.info_bits,
        rate=args.rate,
        frames=args.frames,
        max_iter=args.max_iter,
        seed=args.seed,
        lift_seed=args.lift_seed,
    )
    resp = _dispatch(req, args.server)
    try:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(resp.csv)
    except OSError as exc:
        raise RuntimeError(f"cannot write CSV to {args.out}: {exc}") from exc
    print(f"wrote {len(resp.points)} sweep points to {args.out}")
    return 0


def _cmd_encode(args) -> int:
    out = []
    for line in _read_lines(args.infile):
        req = EncodeRequest(bits=line, rate=args.rate, lift_seed=args.lift_seed, initial_state=args.state)
        resp = _dispatch(req, args.server)
        out.append(f"{_bits_to_hex(line)} {resp.strand} {resp.boundary} {resp.code_id}")
    _write_lines(args.outfile, out)
    return 0


def _cmd_decode(args) -> int:
    out = []
    for line in _read_lines(args.infile):
        fields = line.split()
        if len(fields) == 2:
            strand, boundary = fields
        elif len(fields) == 4:
            strand, boundary = fields[1], fields[2]
        else:
            raise ValueError(f"cannot parse record {line!r}; expected '<strand> <boundary>'")
        req = DecodeRequest(
            strand=strand,
            boundary=int(boundary),
            info_bits=args.info_bits,
            rate=args.rate,
            channel=ChannelSpec(kind=args.channel, param=args.param),
            max_iter=args.max_iter,
            lift_seed=args.lift_seed,
            initial_state=args.state,
        )
        resp = _dispatch(req, args.server)
        out.append(resp.bits)
    _write_lines(args.outfile, out)
    return 0


def _cmd_capacity(args) -> int:
    req = CapacityRequest(channel=ChannelSpec(kind=args.channel, param=args.param), tol=args.tol)
    resp = _dispatch(req, args.server)
    print(f"{resp.bits_per_nt:.6f}")
    return 0


def _cmd_potential(args) -> int:
    resp = _dispatch(PotentialRequest(rate=args.rate), args.server)
    print(f"{resp.bits_per_nt:.6f}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("dnafec.service.app:app", host=args.host, port=args.port)
    return 0


_COMMANDS = {
    "sim": _cmd_sim,
    "encode": _cmd_encode,
    "decode": _cmd_decode,
    "capacity": _cmd_capacity,
    "potential": _cmd_potential,
    "serve": _cmd_serve,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, ChannelError, ValidationError) as exc:
        print(f"dnafec: configuration error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"dnafec: error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
