#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Regenerate the applicability section of data/registry.txt.

Each construct primitive has a list of clause keywords it accepts
(OpenACC 2.7 / OpenMP 5.2). A clause kind is applicable to a primitive
when the keyword of its rendering in that primitive's dialect is in the
list. OpenMP primitives are checked against both the `omp` and the
`fallback` renderings, since either can land on an OpenMP line.

Keywords: the clause name before '('; map/if/depend carry their modifier
("map:to", "if:target"); "()" is a bare parenthesized list; "+simd" is a
construct suffix.

Usage: gen_applicability.py [data/registry.txt]   (rewrites in place)
"""

import re
import sys
from pathlib import Path

MARKER = "# --- generated applicability: tools/gen_applicability.py ---"

MAP_ENTRY = "map map:to map:from map:tofrom map:alloc"

ALLOWED = {
    # OpenACC
    "acc.kernels": "async wait num_gangs num_workers vector_length device_type if self "
                   "copy copyin copyout create no_create present deviceptr attach default",
    "acc.parallel": "async wait num_gangs num_workers vector_length device_type if self reduction "
                    "copy copyin copyout create no_create present deviceptr attach private "
                    "firstprivate default",
    "acc.serial": "async wait device_type if self reduction copy copyin copyout create no_create "
                  "present deviceptr private firstprivate attach default",
    "acc.loop": "collapse gang worker vector seq auto tile device_type independent private reduction",
    "acc.data": "if copy copyin copyout create no_create present deviceptr attach",
    "acc.enter_data": "if async wait copyin create attach",
    "acc.exit_data": "if async wait copyout delete detach finalize",
    "acc.host_data": "use_device if if_present",
    "acc.update": "async wait device_type if if_present self host device",
    "acc.atomic": "read write update capture",
    "acc.wait": "async ()",
    "acc.routine": "gang worker vector seq bind device_type nohost ()",
    "acc.declare": "copy copyin copyout create present deviceptr device_resident link",
    "acc.cache": "",
    "acc.bare": "async wait num_gangs num_workers vector_length device_type if self reduction "
                "copy copyin copyout create no_create present deviceptr attach private "
                "firstprivate default",
    # OpenMP
    "omp.target": "if if:target device thread_limit private firstprivate in_reduction "
                  + MAP_ENTRY + " is_device_ptr has_device_addr defaultmap nowait depend depend:in "
                  "allocate uses_allocators",
    "omp.teams": "num_teams thread_limit default private firstprivate shared reduction allocate if",
    "omp.distribute": "private firstprivate lastprivate collapse dist_schedule allocate order +simd",
    "omp.parallel": "if num_threads default private firstprivate shared copyin reduction "
                    "proc_bind allocate",
    "omp.for": "private firstprivate lastprivate linear reduction schedule collapse ordered "
               "nowait allocate order +simd",
    "omp.loop": "bind collapse order private lastprivate reduction",
    "omp.simd": "if safelen simdlen linear aligned nontemporal private lastprivate reduction "
                "collapse order",
    "omp.atomic": "read write update capture compare fail weak hint seq_cst acq_rel release "
                  "acquire relaxed",
    "omp.taskwait": "depend depend:in nowait",
    "omp.declare_target": "enter link device_type indirect ()",
    "omp.begin_declare_target": "device_type indirect",
    "omp.end_declare_target": "",
    "omp.target_data": "if device " + MAP_ENTRY + " use_device_ptr use_device_addr",
    "omp.target_enter_data": "if device map map:to map:alloc depend depend:in nowait",
    "omp.target_exit_data": "if device map map:from map:release map:delete depend depend:in nowait",
    "omp.target_update": "if device to from depend depend:in nowait",
    "omp.threadprivate": "",
    "omp.scan": "inclusive exclusive",
    "omp.declare_simd": "simdlen linear aligned uniform inbranch notinbranch ()",
    "omp.tile": "sizes",
    "omp.unroll": "full partial",
    "omp.masked": "filter",
    "omp.single": "private firstprivate copyprivate nowait allocate",
    "omp.workshare": "nowait",
    "omp.scope": "private firstprivate reduction nowait allocate",
    "omp.sections": "private firstprivate lastprivate reduction nowait allocate",
    "omp.section": "",
    "omp.task": "if final untied default mergeable private firstprivate shared in_reduction "
                "depend depend:in priority allocate detach affinity",
    "omp.taskloop": "if shared private firstprivate lastprivate reduction in_reduction default "
                    "grainsize num_tasks collapse final priority untied mergeable nogroup "
                    "allocate +simd",
    "omp.taskyield": "",
    "omp.interop": "init use destroy depend depend:in nowait device",
    "omp.critical": "hint ()",
    "omp.barrier": "",
    "omp.taskgroup": "task_reduction allocate",
    "omp.flush": "acq_rel release acquire seq_cst ()",
    "omp.depobj": "depend depend:in update destroy ()",
    "omp.ordered": "threads doacross depend +simd",
}

MODIFIED = {"map", "if", "depend"}


def keyword(template):
    if template == "-":
        return None
    if template.startswith("+"):
        return template
    if template.startswith("("):
        return "()"
    m = re.match(r"([A-Za-z_]+)(\((.*)\))?$", template)
    if not m:
        raise SystemExit(f"cannot derive keyword from template {template!r}")
    name, inner = m.group(1), m.group(3)
    if name in MODIFIED and inner and ":" in inner:
        return name + ":" + inner.split(":", 1)[0].strip()
    return name


def main():
    path = Path(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).parent.parent / "data" / "registry.txt")
    text = path.read_text()
    head = text.split(MARKER, 1)[0].rstrip("\n") + "\n"

    primitives = []
    renders = {}
    kinds = []
    for line in head.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split(None, 3)
        if parts[0] == "primitive":
            primitives.append(parts[1])
        elif parts[0] == "render":
            kind, ctx, tmpl = parts[1], parts[2], parts[3] if len(parts) > 3 else ""
            if kind not in renders:
                renders[kind] = {}
                kinds.append(kind)
            renders[kind][ctx] = keyword(tmpl.strip())

    missing = [p for p in primitives if p not in ALLOWED]
    if missing:
        raise SystemExit(f"no clause list for primitives: {missing}")

    out = [head, "\n", MARKER, "\n"]
    for prim in primitives:
        allowed = set(ALLOWED[prim].split())
        ctxs = ["acc"] if prim.startswith("acc.") else ["omp", "fallback"]
        out.append(f"\n# {prim}\n")
        for kind in kinds:
            kws = {renders[kind].get(c) for c in ctxs} - {None}
            flag = "yes" if kws & allowed else "no"
            out.append(f"applic {prim} {kind} {flag}\n")
    path.write_text("".join(out))


if __name__ == "__main__":
    main()
