"""x86/64 mnemonic and register tables.

Everything here is plain data consulted by the parser, segmenter and DDG
builder. The tables cover the common integer/SSE subset produced by
objdump on typical binaries; unknown mnemonics pass through untouched and
stem to "other" downstream.
"""

# Condition codes used by j<cc>, cmov<cc>, set<cc>.
CONDITION_CODES = (
    "o", "no", "b", "c", "nae", "nb", "nc", "ae", "e", "z", "ne", "nz",
    "be", "na", "nbe", "a", "s", "ns", "p", "pe", "np", "po", "l", "nge",
    "nl", "ge", "le", "ng", "nle", "g", "cxz", "ecxz", "rcxz",
)

GP_REGISTERS = {
    "rax", "rbx", "rcx", "rdx", "rsi", "rdi", "rbp", "rsp",
    "r8", "r9", "r10", "r11", "r12", "r13", "r14", "r15",
    "eax", "ebx", "ecx", "edx", "esi", "edi", "ebp", "esp",
    "r8d", "r9d", "r10d", "r11d", "r12d", "r13d", "r14d", "r15d",
    "ax", "bx", "cx", "dx", "si", "di", "bp", "sp",
    "r8w", "r9w", "r10w", "r11w", "r12w", "r13w", "r14w", "r15w",
    "al", "bl", "cl", "dl", "ah", "bh", "ch", "dh",
    "sil", "dil", "bpl", "spl",
    "r8b", "r9b", "r10b", "r11b", "r12b", "r13b", "r14b", "r15b",
}

SIMD_REGISTERS = (
    {f"xmm{i}" for i in range(16)}
    | {f"ymm{i}" for i in range(16)}
    | {f"zmm{i}" for i in range(32)}
    | {f"mm{i}" for i in range(8)}
    | {f"st({i})" for i in range(8)}
    | {"st"}
)

SEGMENT_REGISTERS = {"cs", "ds", "es", "fs", "gs", "ss"}

OTHER_REGISTERS = {"rip", "eip", "eflags", "rflags", "fs_base", "gs_base"} | {
    f"cr{i}" for i in range(9)
} | {f"dr{i}" for i in range(8)} | {f"k{i}" for i in range(8)}

REGISTERS = GP_REGISTERS | SIMD_REGISTERS | SEGMENT_REGISTERS | OTHER_REGISTERS

# Instruction prefixes stripped off the mnemonic into Instruction.prefixes.
# Segment overrides appear standalone before multi-byte nops (cs nopw ...).
PREFIXES = {"lock", "rep", "repe", "repz", "repne", "repnz", "bnd", "notrack",
            "data16", "addr32"} | SEGMENT_REGISTERS

CONDITIONAL_JUMPS = {f"j{cc}" for cc in CONDITION_CODES}
UNCONDITIONAL_JUMPS = {"jmp", "ljmp"}
CALLS = {"call", "lcall"}
RETURNS = {"ret", "retf", "iret", "lret"}
INTERRUPTS = {"int", "int1", "int3", "into"}
SYSCALLS = {"syscall", "sysenter", "sysexit", "sysret"}
HALTS = {"hlt"}


def control_kind(mnemonic):
    """Control-transfer class of a mnemonic, or None for straight-line code.

    Returns one of "jump", "cond", "call", "ret", "int", "syscall", "halt".
    """
    if mnemonic in UNCONDITIONAL_JUMPS:
        return "jump"
    if mnemonic in CONDITIONAL_JUMPS:
        return "cond"
    if mnemonic in CALLS:
        return "call"
    if mnemonic in RETURNS:
        return "ret"
    if mnemonic in INTERRUPTS:
        return "int"
    if mnemonic in SYSCALLS:
        return "syscall"
    if mnemonic in HALTS:
        return "halt"
    return None


CMOV_MNEMONICS = {f"cmov{cc}" for cc in CONDITION_CODES}

# Data-movement family for DDG extraction under the mov_only policy.
MOV_FAMILY = {"mov", "movabs", "movzx", "movsx", "xchg"} | CMOV_MNEMONICS


def is_mov_family(mnemonic):
    return mnemonic in MOV_FAMILY


# Mnemonics whose AT&T spelling may carry a b/w/l/q operand-size suffix
# that Intel syntax omits. "cmovb"/"jb"/"setb" style mnemonics are NOT
# derivable from this set (their trailing letter is a condition code), so
# only suffixed forms of the bases below are ever rewritten.
SUFFIX_STRIP_BASES = (
    {
        "mov", "movabs", "add", "sub", "and", "or", "xor", "cmp", "test",
        "lea", "push", "pop", "call", "ret", "jmp", "inc", "dec", "neg",
        "not", "mul", "imul", "div", "idiv", "shl", "shr", "sar", "sal",
        "rol", "ror", "rcl", "rcr", "adc", "sbb", "xchg", "leave", "iret",
        "bswap", "bt", "bts", "btr", "xadd", "nop",
    }
    | CMOV_MNEMONICS
)

# Shift/rotate forms whose by-one variant prints without the immediate in
# AT&T syntax (sar %rsi) but with it in Intel (sar rsi,1).
SHIFT_ROTATE = {"shl", "shr", "sal", "sar", "rol", "ror", "rcl", "rcr"}

_SIZE_SUFFIXES = "bwlq"


def normalize_mnemonic(mnemonic, att):
    """Lowercase and, for AT&T input, fold operand-size suffixes away.

    movzbl/movzbq/... -> movzx, movsbl/movslq/... -> movsx, movsxd -> movsx,
    movl -> mov, pushq -> push, and so on. Intel-mode input is only
    lowercased (movsxd is still folded so both syntaxes agree).
    """
    m = mnemonic.lower()
    if m == "movsxd":
        return "movsx"
    if not att:
        return m
    if len(m) == 6 and m.startswith(("movz", "movs")) and \
            m[4] in _SIZE_SUFFIXES and m[5] in _SIZE_SUFFIXES:
        return "movzx" if m[3] == "z" else "movsx"
    if len(m) > 2 and m[-1] in _SIZE_SUFFIXES and m[:-1] in SUFFIX_STRIP_BASES:
        return m[:-1]
    return m
