#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mldfs {

enum class Opcode : uint8_t {
  ADD, SUB, ADDI, AND, OR, XOR, NOR,
  SLL, SRL, SRA, SLT, MUL,
  LW, SW, BEQ, BNE, J, NOP,
};

constexpr int kOpcodeCount = 18;

const char* opcode_name(Opcode op);
std::optional<Opcode> opcode_from_name(std::string_view name);  // case-insensitive

struct Instruction {
  Opcode op = Opcode::NOP;
  uint8_t rd = 0;
  uint8_t rs = 0;
  uint8_t rt = 0;
  // Immediate, shift amount, or branch/jump target index depending on op.
  int32_t imm = 0;
  uint32_t line = 0;  // 1-based source line, 0 for synthetic instructions
};

struct Program {
  std::vector<Instruction> instructions;
  std::map<uint32_t, uint32_t> data_init;  // word address -> initial value
  std::map<std::string, uint32_t> labels;  // label -> instruction index
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, uint32_t line, uint32_t col);
  uint32_t line;
  uint32_t col;
};

class SimError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MemoryError : public SimError {
 public:
  MemoryError(uint32_t address, uint32_t line);
  uint32_t address;
  uint32_t line;
};

class StepLimitError : public SimError {
 public:
  explicit StepLimitError(uint64_t limit);
  uint64_t limit;
};

// Accepted syntax, one instruction per line:
//   OP rd, rs, rt        (ADD SUB AND OR XOR NOR SLT MUL)
//   OP rd, rs, imm       (ADDI SLL SRL SRA)
//   LW rd, imm(rs)   /   SW rt, imm(rs)
//   BEQ rs, rt, target   (target: label or instruction index)
//   J target
//   NOP
// '#' starts a comment; labels are 'name:'; opcodes and registers are
// case-insensitive. A label may sit one past the last instruction: jumping
// there halts the program.
Program parse_program(const std::string& text);

std::string format_instruction(const Instruction& ins);
std::string write_program_asm(const Program& p);

constexpr uint32_t kDefaultMemWords = 65536;

// Word-addressed memory; r0 is hardwired to zero.
struct MachineState {
  std::array<uint32_t, 32> regs{};
  std::vector<uint32_t> mem;
  uint32_t pc = 0;

  explicit MachineState(uint32_t mem_words = kDefaultMemWords)
      : mem(mem_words, 0) {}

  void write_reg(uint8_t r, uint32_t v) {
    if (r != 0) regs[r] = v;
  }

  bool operator==(const MachineState&) const = default;
};

// Execute-unit view of one instruction: the two operands entering the unit
// and the value it produces (ALU result, effective address, or branch
// outcome). J and NOP never reach the execute unit and have no event.
struct ExecEvent {
  uint32_t a = 0;
  uint32_t b = 0;
  uint32_t result = 0;
};

bool has_exec_event(Opcode op);
bool writes_reg(Opcode op);

// Registers whose values feed the execute unit (address base counts, store
// data does not). Unused entries are -1.
std::array<int, 2> exec_source_regs(const Instruction& ins);

// Applies one instruction to the state, advancing pc, and reports the
// execute-unit event if the op has one. Branch/jump targets are instruction
// indices; memory accesses outside [0, mem.size()) throw MemoryError.
std::optional<ExecEvent> exec_instruction(const Instruction& ins,
                                          MachineState& s);

struct RunResult {
  MachineState state;
  uint64_t retired = 0;
};

// Runs to completion (pc falling outside the program). Throws StepLimitError
// once max_steps instructions have retired without halting.
RunResult run_reference(const Program& p, uint64_t max_steps,
                        uint32_t mem_words = kDefaultMemWords);

}  // namespace mldfs
