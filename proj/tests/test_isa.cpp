#include <doctest.h>

#include "mldfs/isa.hpp"

using namespace mldfs;

TEST_CASE("parse accepts the documented forms") {
  Program p = parse_program(
      "# three-register, immediate, memory, branch, jump\n"
      "start:\n"
      "ADDI r1, r0, 5\n"
      "add r2, r1, r1\n"
      "LW r3, 4(r1)\n"
      "SW r2, 0(r0)\n"
      "BEQ r1, r2, start\n"
      "J end\n"
      "NOP\n"
      "end:\n");
  REQUIRE(p.instructions.size() == 7);
  CHECK(p.instructions[0].op == Opcode::ADDI);
  CHECK(p.instructions[0].rd == 1);
  CHECK(p.instructions[0].imm == 5);
  CHECK(p.instructions[1].op == Opcode::ADD);  // opcodes are case-insensitive
  CHECK(p.instructions[2].op == Opcode::LW);
  CHECK(p.instructions[2].rs == 1);
  CHECK(p.instructions[2].imm == 4);
  CHECK(p.instructions[4].imm == 0);  // label resolved to instruction index
  CHECK(p.instructions[5].imm == 7);  // label one past the end halts
  CHECK(p.labels.at("start") == 0);
}

TEST_CASE("parse rejects malformed input with position info") {
  CHECK_THROWS_AS(parse_program("FROB r1, r2, r3\n"), ParseError);
  CHECK_THROWS_AS(parse_program("ADD r1, r2\n"), ParseError);
  CHECK_THROWS_AS(parse_program("ADD r1, r2, r32\n"), ParseError);
  CHECK_THROWS_AS(parse_program("BEQ r1, r2, nowhere\n"), ParseError);
  try {
    parse_program("NOP\nNOP\nBOGUS\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
  }
}

TEST_CASE("arithmetic fixtures") {
  SUBCASE("ADD 2 + 3 = 5") {
    auto r = run_reference(parse_program("ADDI r1, r0, 2\n"
                                         "ADDI r2, r0, 3\n"
                                         "ADD r3, r1, r2\n"),
                           1000);
    CHECK(r.state.regs[3] == 5);
    CHECK(r.retired == 3);
  }
  SUBCASE("XOR x, x = 0") {
    auto r = run_reference(parse_program("ADDI r1, r0, 12345\n"
                                         "XOR r2, r1, r1\n"),
                           1000);
    CHECK(r.state.regs[2] == 0);
  }
  SUBCASE("SUB 0 - 1 wraps to 0xFFFFFFFF") {
    auto r = run_reference(parse_program("ADDI r1, r0, 1\n"
                                         "SUB r2, r0, r1\n"),
                           1000);
    CHECK(r.state.regs[2] == 0xFFFFFFFFu);
  }
  SUBCASE("SLT is signed") {
    auto r = run_reference(parse_program("ADDI r1, r0, -1\n"
                                         "ADDI r2, r0, 1\n"
                                         "SLT r3, r1, r2\n"
                                         "SLT r4, r2, r1\n"),
                           1000);
    CHECK(r.state.regs[3] == 1);
    CHECK(r.state.regs[4] == 0);
  }
  SUBCASE("shifts use the low 5 bits of the amount") {
    auto r = run_reference(parse_program("ADDI r1, r0, 1\n"
                                         "SLL r2, r1, 4\n"
                                         "ADDI r3, r0, -8\n"
                                         "SRA r4, r3, 1\n"
                                         "SRL r5, r3, 1\n"),
                           1000);
    CHECK(r.state.regs[2] == 16);
    CHECK(r.state.regs[4] == 0xFFFFFFFCu);   // arithmetic keeps the sign
    CHECK(r.state.regs[5] == 0x7FFFFFFCu);   // logical does not
  }
  SUBCASE("MUL keeps the low 32 bits") {
    auto r = run_reference(parse_program("ADDI r1, r0, 0x10000\n"
                                         "MUL r2, r1, r1\n"),
                           1000);
    CHECK(r.state.regs[2] == 0);
  }
}

TEST_CASE("r0 is hardwired to zero") {
  auto r = run_reference(parse_program("ADDI r0, r0, 7\n"
                                       "ADD r1, r0, r0\n"),
                         1000);
  CHECK(r.state.regs[0] == 0);
  CHECK(r.state.regs[1] == 0);
}

TEST_CASE("empty program retires nothing") {
  auto r = run_reference(parse_program(""), 1000);
  CHECK(r.retired == 0);
  CHECK(r.state.pc == 0);
}

TEST_CASE("loop sums 1..10") {
  auto r = run_reference(parse_program("ADDI r1, r0, 0\n"   // i
                                       "ADDI r5, r0, 0\n"   // sum
                                       "ADDI r2, r0, 10\n"
                                       "loop:\n"
                                       "ADDI r1, r1, 1\n"
                                       "ADD r5, r5, r1\n"
                                       "BNE r1, r2, loop\n"),
                         1000);
  CHECK(r.state.regs[5] == 55);
}

TEST_CASE("infinite loop hits the step limit") {
  Program p = parse_program("spin:\nJ spin\n");
  CHECK_THROWS_AS(run_reference(p, 1000), StepLimitError);
  try {
    run_reference(p, 1000);
  } catch (const StepLimitError& e) {
    CHECK(e.limit == 1000);
  }
}

TEST_CASE("memory access is word-addressed and bounds-checked") {
  Program p = parse_program("ADDI r1, r0, 3\n"
                            "SW r1, 5(r0)\n"
                            "LW r2, 5(r0)\n");
  auto r = run_reference(p, 1000);
  CHECK(r.state.mem[5] == 3);
  CHECK(r.state.regs[2] == 3);

  Program oob = parse_program("ADDI r1, r0, 100\n"
                              "LW r2, 0(r1)\n");
  CHECK_THROWS_AS(run_reference(oob, 1000, /*mem_words=*/64), MemoryError);
}

TEST_CASE("exec events and source registers") {
  Instruction lw;
  lw.op = Opcode::LW;
  lw.rd = 2;
  lw.rs = 1;
  CHECK(exec_source_regs(lw) == std::array<int, 2>{1, -1});  // base only

  Instruction sw;
  sw.op = Opcode::SW;
  sw.rt = 2;
  sw.rs = 1;
  CHECK(exec_source_regs(sw) == std::array<int, 2>{1, -1});  // data excluded

  CHECK(!has_exec_event(Opcode::J));
  CHECK(!has_exec_event(Opcode::NOP));
  CHECK(has_exec_event(Opcode::ADD));
  CHECK(has_exec_event(Opcode::BEQ));
  CHECK(!writes_reg(Opcode::SW));
  CHECK(!writes_reg(Opcode::BEQ));
  CHECK(writes_reg(Opcode::LW));
}

TEST_CASE("exec_instruction reports the execute-unit view") {
  MachineState s(64);
  s.write_reg(1, 0xF0F0F0F0u);
  s.write_reg(2, 0x0F0F0F0Fu);
  Instruction add;
  add.op = Opcode::ADD;
  add.rd = 3;
  add.rs = 1;
  add.rt = 2;
  auto ev = exec_instruction(add, s);
  REQUIRE(ev.has_value());
  CHECK(ev->a == 0xF0F0F0F0u);
  CHECK(ev->b == 0x0F0F0F0Fu);
  CHECK(ev->result == 0xFFFFFFFFu);

  Instruction j;
  j.op = Opcode::J;
  j.imm = 0;
  CHECK(!exec_instruction(j, s).has_value());
  CHECK(s.pc == 0);
}

TEST_CASE("program text round-trips through the writer") {
  const std::string src =
      "ADDI r1, r0, -17\n"
      "SLL r2, r1, 3\n"
      "LW r3, 2(r1)\n"
      "SW r3, 0(r2)\n"
      "BNE r1, r3, 0\n"
      "J 6\n";
  Program p = parse_program(src);
  Program q = parse_program(write_program_asm(p));
  REQUIRE(q.instructions.size() == p.instructions.size());
  for (size_t i = 0; i < p.instructions.size(); ++i) {
    CHECK(q.instructions[i].op == p.instructions[i].op);
    CHECK(q.instructions[i].rd == p.instructions[i].rd);
    CHECK(q.instructions[i].rs == p.instructions[i].rs);
    CHECK(q.instructions[i].rt == p.instructions[i].rt);
    CHECK(q.instructions[i].imm == p.instructions[i].imm);
  }
}

TEST_CASE("opcode names round-trip") {
  for (int i = 0; i < kOpcodeCount; ++i) {
    Opcode op = static_cast<Opcode>(i);
    auto back = opcode_from_name(opcode_name(op));
    REQUIRE(back.has_value());
    CHECK(*back == op);
  }
  CHECK(!opcode_from_name("NOTANOP").has_value());
}
