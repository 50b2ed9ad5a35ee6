"""Basic-block segmentation and control flow graph recovery.

Leaders are the first instruction of a function, every target of a direct
intra-function jump, and every instruction following a control transfer.
Blocks therefore partition the instruction stream in order, and a control
transfer can only ever sit in the final slot of its block.
"""

from dataclasses import dataclass

from . import isa
from .disasm import IMMEDIATE, FunctionListing

JUMP = "jump"
FALLTHROUGH = "fallthrough"
CALL_RETURN = "call_return"


@dataclass(frozen=True)
class BasicBlock:
    id: int
    function: str
    start_address: int
    instructions: tuple


@dataclass
class ControlFlowGraph:
    nodes: list[int]
    edges: set  # (src id, dst id, kind)
    external_targets: list  # (block id, target address) outside the function
    dangling_targets: list  # (block id, target address) inside, mid-instruction
    indirect_transfers: int = 0

    def edge_pairs(self):
        return {(a, b) for a, b, _ in self.edges}


def _direct_target(instr):
    """Target address of a direct jump/call, or None when indirect."""
    if len(instr.operands) == 1 and instr.operands[0].kind == IMMEDIATE:
        return instr.operands[0].value
    return None


def segment(listing: FunctionListing, call_terminates=True, first_id=0):
    """Split a function into basic blocks.

    call_terminates controls whether call ends a block (the default); with
    it off, calls are treated as straight-line instructions.
    """
    instrs = listing.instructions
    addr_to_index = {ins.address: i for i, ins in enumerate(instrs)}

    leaders = {0}
    for i, ins in enumerate(instrs):
        kind = isa.control_kind(ins.mnemonic)
        if kind is None or (kind == "call" and not call_terminates):
            continue
        if i + 1 < len(instrs):
            leaders.add(i + 1)
        if kind in ("jump", "cond"):
            target = _direct_target(ins)
            if target is not None and target in addr_to_index:
                leaders.add(addr_to_index[target])

    blocks = []
    ordered = sorted(leaders)
    for bid, start in enumerate(ordered):
        end = ordered[bid + 1] if bid + 1 < len(ordered) else len(instrs)
        blocks.append(
            BasicBlock(
                id=first_id + bid,
                function=listing.name,
                start_address=instrs[start].address,
                instructions=tuple(instrs[start:end]),
            )
        )
    return blocks


def build_cfg(blocks, call_terminates=True):
    """Recover the intra-function CFG from one function's blocks.

    Direct jump targets resolve to the block starting at that address.
    Targets beyond the function are recorded as external, targets inside
    the function that hit no block boundary as dangling. Indirect
    transfers produce no edge and are only counted.
    """
    cfg = ControlFlowGraph(
        nodes=[b.id for b in blocks],
        edges=set(),
        external_targets=[],
        dangling_targets=[],
    )
    if not blocks:
        return cfg
    start_to_id = {b.start_address: b.id for b in blocks}
    lo = blocks[0].instructions[0].address
    hi = blocks[-1].instructions[-1].address

    def resolve_jump(src_id, instr):
        target = _direct_target(instr)
        if target is None:
            cfg.indirect_transfers += 1
            return
        if target in start_to_id:
            cfg.edges.add((src_id, start_to_id[target], JUMP))
        elif lo <= target <= hi:
            cfg.dangling_targets.append((src_id, target))
        else:
            cfg.external_targets.append((src_id, target))

    for pos, block in enumerate(blocks):
        nxt = blocks[pos + 1].id if pos + 1 < len(blocks) else None
        last = block.instructions[-1]
        kind = isa.control_kind(last.mnemonic)
        if kind == "call" and not call_terminates:
            kind = None
        if kind == "jump":
            resolve_jump(block.id, last)
        elif kind == "cond":
            resolve_jump(block.id, last)
            if nxt is not None:
                cfg.edges.add((block.id, nxt, FALLTHROUGH))
        elif kind == "call":
            if nxt is not None:
                cfg.edges.add((block.id, nxt, CALL_RETURN))
        elif kind in ("int", "syscall"):
            # execution resumes after the trap
            if nxt is not None:
                cfg.edges.add((block.id, nxt, FALLTHROUGH))
        elif kind in ("ret", "halt"):
            pass
        else:
            # block ended because the next instruction is a jump target
            if nxt is not None:
                cfg.edges.add((block.id, nxt, FALLTHROUGH))
    return cfg
