#include "mldfs/isa.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

namespace mldfs {

namespace {

const char* kOpcodeNames[kOpcodeCount] = {
    "ADD", "SUB", "ADDI", "AND", "OR", "XOR", "NOR",
    "SLL", "SRL", "SRA", "SLT", "MUL",
    "LW", "SW", "BEQ", "BNE", "J", "NOP",
};

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

const char* opcode_name(Opcode op) {
  return kOpcodeNames[static_cast<int>(op)];
}

std::optional<Opcode> opcode_from_name(std::string_view name) {
  std::string u = upper(name);
  for (int i = 0; i < kOpcodeCount; ++i) {
    if (u == kOpcodeNames[i]) return static_cast<Opcode>(i);
  }
  return std::nullopt;
}

ParseError::ParseError(const std::string& msg, uint32_t line_, uint32_t col_)
    : std::runtime_error("line " + std::to_string(line_) + ", col " +
                         std::to_string(col_) + ": " + msg),
      line(line_),
      col(col_) {}

MemoryError::MemoryError(uint32_t address_, uint32_t line_)
    : SimError("memory access out of bounds at address " +
               std::to_string(address_) +
               (line_ ? " (line " + std::to_string(line_) + ")" : "")),
      address(address_),
      line(line_) {}

StepLimitError::StepLimitError(uint64_t limit_)
    : SimError("step limit of " + std::to_string(limit_) +
               " exceeded; program did not halt"),
      limit(limit_) {}

namespace {

struct Token {
  std::string text;
  uint32_t col;  // 1-based column in the source line
};

// Splits an operand field on commas, keeping source columns for diagnostics.
std::vector<Token> split_operands(const std::string& s, uint32_t base_col) {
  std::vector<Token> out;
  size_t start = 0;
  while (true) {
    size_t comma = s.find(',', start);
    std::string piece = s.substr(start, comma == std::string::npos
                                            ? std::string::npos
                                            : comma - start);
    size_t b = piece.find_first_not_of(" \t");
    size_t e = piece.find_last_not_of(" \t");
    if (b == std::string::npos) {
      out.push_back({"", base_col + static_cast<uint32_t>(start)});
    } else {
      out.push_back({piece.substr(b, e - b + 1),
                     base_col + static_cast<uint32_t>(start + b)});
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

bool is_ident(std::string_view s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

uint8_t parse_reg(const Token& t, uint32_t line) {
  if (t.text.size() < 2 || (t.text[0] != 'r' && t.text[0] != 'R'))
    throw ParseError("expected register, got '" + t.text + "'", line, t.col);
  int v = 0;
  auto [p, ec] = std::from_chars(t.text.data() + 1, t.text.data() + t.text.size(), v);
  if (ec != std::errc() || p != t.text.data() + t.text.size())
    throw ParseError("expected register, got '" + t.text + "'", line, t.col);
  if (v < 0 || v > 31)
    throw ParseError("register index out of range: '" + t.text + "'", line, t.col);
  return static_cast<uint8_t>(v);
}

// Accepts decimal (optionally negative) or 0x hex; any 32-bit pattern.
int32_t parse_imm(const Token& t, uint32_t line) {
  const std::string& s = t.text;
  if (s.empty()) throw ParseError("expected immediate", line, t.col);
  bool neg = s[0] == '-';
  size_t pos = neg ? 1 : 0;
  int base = 10;
  if (s.size() >= pos + 2 && s[pos] == '0' && (s[pos + 1] == 'x' || s[pos + 1] == 'X')) {
    base = 16;
    pos += 2;
  }
  uint64_t mag = 0;
  auto [p, ec] = std::from_chars(s.data() + pos, s.data() + s.size(), mag, base);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ParseError("bad immediate '" + s + "'", line, t.col);
  if (neg ? mag > 0x80000000ULL : mag > 0xFFFFFFFFULL)
    throw ParseError("immediate out of range: '" + s + "'", line, t.col);
  uint32_t bits = neg ? static_cast<uint32_t>(~mag + 1) : static_cast<uint32_t>(mag);
  return static_cast<int32_t>(bits);
}

struct PendingTarget {
  size_t instr_index;
  std::string label;
  uint32_t line;
  uint32_t col;
};

}  // namespace

Program parse_program(const std::string& text) {
  Program prog;
  std::vector<PendingTarget> pending;
  std::istringstream in(text);
  std::string raw;
  uint32_t lineno = 0;

  auto parse_target = [&](const Token& t, uint32_t line, Instruction& ins) {
    if (!t.text.empty() &&
        (std::isdigit(static_cast<unsigned char>(t.text[0])) || t.text[0] == '-')) {
      ins.imm = parse_imm(t, line);
      if (ins.imm < 0)
        throw ParseError("branch target cannot be negative", line, t.col);
    } else if (is_ident(t.text)) {
      pending.push_back({prog.instructions.size(), t.text, line, t.col});
    } else {
      throw ParseError("bad branch target '" + t.text + "'", line, t.col);
    }
  };

  while (std::getline(in, raw)) {
    ++lineno;
    std::string lineText = raw;
    if (size_t hash = lineText.find('#'); hash != std::string::npos)
      lineText.resize(hash);

    size_t off = lineText.find_first_not_of(" \t\r");
    if (off == std::string::npos) continue;
    size_t tail = lineText.find_last_not_of(" \t\r");
    std::string body = lineText.substr(off, tail - off + 1);
    uint32_t col0 = static_cast<uint32_t>(off) + 1;

    // Leading labels ("name:"), possibly several, then an optional instruction.
    while (true) {
      size_t colon = body.find(':');
      if (colon == std::string::npos) break;
      std::string name = body.substr(0, colon);
      size_t ne = name.find_last_not_of(" \t");
      name = ne == std::string::npos ? "" : name.substr(0, ne + 1);
      if (!is_ident(name))
        throw ParseError("bad label '" + name + "'", lineno, col0);
      if (prog.labels.count(name))
        throw ParseError("duplicate label '" + name + "'", lineno, col0);
      prog.labels[name] = static_cast<uint32_t>(prog.instructions.size());
      size_t rest = body.find_first_not_of(" \t", colon + 1);
      if (rest == std::string::npos) {
        body.clear();
        break;
      }
      col0 += static_cast<uint32_t>(rest);
      body = body.substr(rest);
    }
    if (body.empty()) continue;

    size_t sp = body.find_first_of(" \t");
    std::string mnemonic = body.substr(0, sp);
    auto op = opcode_from_name(mnemonic);
    if (!op)
      throw ParseError("unknown opcode '" + mnemonic + "'", lineno, col0);

    std::string operand_str;
    uint32_t operand_col = col0;
    if (sp != std::string::npos) {
      size_t ob = body.find_first_not_of(" \t", sp);
      if (ob != std::string::npos) {
        operand_str = body.substr(ob);
        operand_col = col0 + static_cast<uint32_t>(ob);
      }
    }

    Instruction ins;
    ins.op = *op;
    ins.line = lineno;
    std::vector<Token> ops;
    if (!operand_str.empty()) ops = split_operands(operand_str, operand_col);

    auto expect_count = [&](size_t n) {
      if (ops.size() != n)
        throw ParseError(std::string(opcode_name(*op)) + " expects " +
                             std::to_string(n) + " operand(s), got " +
                             std::to_string(ops.size()),
                         lineno, operand_col);
    };

    switch (*op) {
      case Opcode::ADD: case Opcode::SUB: case Opcode::AND: case Opcode::OR:
      case Opcode::XOR: case Opcode::NOR: case Opcode::SLT: case Opcode::MUL:
        expect_count(3);
        ins.rd = parse_reg(ops[0], lineno);
        ins.rs = parse_reg(ops[1], lineno);
        ins.rt = parse_reg(ops[2], lineno);
        break;
      case Opcode::ADDI: case Opcode::SLL: case Opcode::SRL: case Opcode::SRA:
        expect_count(3);
        ins.rd = parse_reg(ops[0], lineno);
        ins.rs = parse_reg(ops[1], lineno);
        ins.imm = parse_imm(ops[2], lineno);
        break;
      case Opcode::LW: case Opcode::SW: {
        expect_count(2);
        uint8_t data_reg = parse_reg(ops[0], lineno);
        const std::string& m = ops[1].text;
        size_t lp = m.find('(');
        size_t rp = m.find(')');
        if (lp == std::string::npos || rp == std::string::npos || rp < lp ||
            rp != m.size() - 1)
          throw ParseError("expected imm(rs), got '" + m + "'", lineno, ops[1].col);
        ins.imm = parse_imm({m.substr(0, lp), ops[1].col}, lineno);
        ins.rs = parse_reg({m.substr(lp + 1, rp - lp - 1),
                            ops[1].col + static_cast<uint32_t>(lp) + 1},
                           lineno);
        if (*op == Opcode::LW) ins.rd = data_reg; else ins.rt = data_reg;
        break;
      }
      case Opcode::BEQ: case Opcode::BNE:
        expect_count(3);
        ins.rs = parse_reg(ops[0], lineno);
        ins.rt = parse_reg(ops[1], lineno);
        parse_target(ops[2], lineno, ins);
        break;
      case Opcode::J:
        expect_count(1);
        parse_target(ops[0], lineno, ins);
        break;
      case Opcode::NOP:
        expect_count(0);
        break;
    }
    prog.instructions.push_back(ins);
  }

  const uint32_t n = static_cast<uint32_t>(prog.instructions.size());
  for (const auto& pt : pending) {
    auto it = prog.labels.find(pt.label);
    if (it == prog.labels.end())
      throw ParseError("unresolved label '" + pt.label + "'", pt.line, pt.col);
    prog.instructions[pt.instr_index].imm = static_cast<int32_t>(it->second);
  }
  for (const auto& ins : prog.instructions) {
    if (ins.op == Opcode::BEQ || ins.op == Opcode::BNE || ins.op == Opcode::J) {
      // Target n (one past the end) is a valid halt destination.
      if (static_cast<uint32_t>(ins.imm) > n)
        throw ParseError("branch target " + std::to_string(ins.imm) +
                             " outside program of " + std::to_string(n) +
                             " instructions",
                         ins.line, 1);
    }
  }
  return prog;
}

std::string format_instruction(const Instruction& ins) {
  std::ostringstream os;
  os << opcode_name(ins.op);
  auto reg = [](int r) { return "r" + std::to_string(r); };
  switch (ins.op) {
    case Opcode::ADD: case Opcode::SUB: case Opcode::AND: case Opcode::OR:
    case Opcode::XOR: case Opcode::NOR: case Opcode::SLT: case Opcode::MUL:
      os << " " << reg(ins.rd) << ", " << reg(ins.rs) << ", " << reg(ins.rt);
      break;
    case Opcode::ADDI: case Opcode::SLL: case Opcode::SRL: case Opcode::SRA:
      os << " " << reg(ins.rd) << ", " << reg(ins.rs) << ", " << ins.imm;
      break;
    case Opcode::LW:
      os << " " << reg(ins.rd) << ", " << ins.imm << "(" << reg(ins.rs) << ")";
      break;
    case Opcode::SW:
      os << " " << reg(ins.rt) << ", " << ins.imm << "(" << reg(ins.rs) << ")";
      break;
    case Opcode::BEQ: case Opcode::BNE:
      os << " " << reg(ins.rs) << ", " << reg(ins.rt) << ", " << ins.imm;
      break;
    case Opcode::J:
      os << " " << ins.imm;
      break;
    case Opcode::NOP:
      break;
  }
  return os.str();
}

std::string write_program_asm(const Program& p) {
  // Branch targets are emitted numerically, so labels need not be preserved.
  std::string out;
  for (const auto& ins : p.instructions) {
    out += format_instruction(ins);
    out += '\n';
  }
  return out;
}

bool has_exec_event(Opcode op) {
  return op != Opcode::J && op != Opcode::NOP;
}

bool writes_reg(Opcode op) {
  switch (op) {
    case Opcode::SW: case Opcode::BEQ: case Opcode::BNE:
    case Opcode::J: case Opcode::NOP:
      return false;
    default:
      return true;
  }
}

std::array<int, 2> exec_source_regs(const Instruction& ins) {
  switch (ins.op) {
    case Opcode::ADD: case Opcode::SUB: case Opcode::AND: case Opcode::OR:
    case Opcode::XOR: case Opcode::NOR: case Opcode::SLT: case Opcode::MUL:
    case Opcode::BEQ: case Opcode::BNE:
      return {ins.rs, ins.rt};
    case Opcode::ADDI: case Opcode::SLL: case Opcode::SRL: case Opcode::SRA:
    case Opcode::LW: case Opcode::SW:
      return {ins.rs, -1};  // store data is consumed at MEM, not EXE
    case Opcode::J: case Opcode::NOP:
      return {-1, -1};
  }
  return {-1, -1};
}

std::optional<ExecEvent> exec_instruction(const Instruction& ins, MachineState& s) {
  const auto& r = s.regs;
  uint32_t next = s.pc + 1;
  std::optional<ExecEvent> ev;
  const uint32_t imm_u = static_cast<uint32_t>(ins.imm);

  switch (ins.op) {
    case Opcode::ADD: {
      uint32_t v = r[ins.rs] + r[ins.rt];
      ev = ExecEvent{r[ins.rs], r[ins.rt], v};
      s.write_reg(ins.rd, v);
      break;
    }
    case Opcode::SUB: {
      uint32_t v = r[ins.rs] - r[ins.rt];
      ev = ExecEvent{r[ins.rs], r[ins.rt], v};
      s.write_reg(ins.rd, v);
      break;
    }
    case Opcode::ADDI: {
      uint32_t v = r[ins.rs] + imm_u;
      ev = ExecEvent{r[ins.rs], imm_u, v};
      s.write_reg(ins.rd, v);
      break;
    }
    case Opcode::AND: {
      uint32_t v = r[ins.rs] & r[ins.rt];
      ev = ExecEvent{r[ins.rs], r[ins.rt], v};
      s.write_reg(ins.rd, v);
      break;
    }
    case Opcode::OR: {
      uint32_t v = r[ins.rs] | r[ins.rt];
      ev = ExecEvent{r[ins.rs], r[ins.rt], v};
      s.write_reg(ins.rd, v);
      break;
    }
    case Opcode::XOR: {
      uint32_t v = r[ins.rs] ^ r[ins.rt];
      ev = ExecEvent{r[ins.rs], r[ins.rt], v};
      s.write_reg(ins.rd, v);
      break;
    }
    case Opcode::NOR: {
      uint32_t v = ~(r[ins.rs] | r[ins.rt]);
      ev = ExecEvent{r[ins.rs], r[ins.rt], v};
      s.write_reg(ins.rd, v);
      break;
    }
    case Opcode::SLL: {
      uint32_t v = r[ins.rs] << (imm_u & 31);
      ev = ExecEvent{r[ins.rs], imm_u, v};
      s.write_reg(ins.rd, v);
      break;
    }
    case Opcode::SRL: {
      uint32_t v = r[ins.rs] >> (imm_u & 31);
      ev = ExecEvent{r[ins.rs], imm_u, v};
      s.write_reg(ins.rd, v);
      break;
    }
    case Opcode::SRA: {
      uint32_t v = static_cast<uint32_t>(static_cast<int32_t>(r[ins.rs]) >>
                                         (imm_u & 31));
      ev = ExecEvent{r[ins.rs], imm_u, v};
      s.write_reg(ins.rd, v);
      break;
    }
    case Opcode::SLT: {
      uint32_t v = static_cast<int32_t>(r[ins.rs]) < static_cast<int32_t>(r[ins.rt])
                       ? 1u : 0u;
      ev = ExecEvent{r[ins.rs], r[ins.rt], v};
      s.write_reg(ins.rd, v);
      break;
    }
    case Opcode::MUL: {
      uint32_t v = static_cast<uint32_t>(
          static_cast<uint64_t>(r[ins.rs]) * static_cast<uint64_t>(r[ins.rt]));
      ev = ExecEvent{r[ins.rs], r[ins.rt], v};
      s.write_reg(ins.rd, v);
      break;
    }
    case Opcode::LW: {
      uint32_t addr = r[ins.rs] + imm_u;
      if (addr >= s.mem.size()) throw MemoryError(addr, ins.line);
      ev = ExecEvent{r[ins.rs], imm_u, addr};
      s.write_reg(ins.rd, s.mem[addr]);
      break;
    }
    case Opcode::SW: {
      uint32_t addr = r[ins.rs] + imm_u;
      if (addr >= s.mem.size()) throw MemoryError(addr, ins.line);
      ev = ExecEvent{r[ins.rs], imm_u, addr};
      s.mem[addr] = r[ins.rt];
      break;
    }
    case Opcode::BEQ: {
      bool taken = r[ins.rs] == r[ins.rt];
      ev = ExecEvent{r[ins.rs], r[ins.rt], taken ? 1u : 0u};
      if (taken) next = imm_u;
      break;
    }
    case Opcode::BNE: {
      bool taken = r[ins.rs] != r[ins.rt];
      ev = ExecEvent{r[ins.rs], r[ins.rt], taken ? 1u : 0u};
      if (taken) next = imm_u;
      break;
    }
    case Opcode::J:
      next = imm_u;
      break;
    case Opcode::NOP:
      break;
  }
  s.pc = next;
  return ev;
}

RunResult run_reference(const Program& p, uint64_t max_steps, uint32_t mem_words) {
  MachineState s(mem_words);
  for (const auto& [addr, val] : p.data_init) {
    if (addr >= mem_words) throw MemoryError(addr, 0);
    s.mem[addr] = val;
  }
  const uint32_t n = static_cast<uint32_t>(p.instructions.size());
  uint64_t retired = 0;
  while (s.pc < n) {
    if (retired >= max_steps) throw StepLimitError(max_steps);
    exec_instruction(p.instructions[s.pc], s);
    ++retired;
  }
  return {std::move(s), retired};
}

}  // namespace mldfs
