#include "doctest.h"
#include "tracelab/minic/parser.hpp"

using namespace tracelab::minic;

TEST_CASE("rejected programs raise ParseError with a position") {
  CHECK_THROWS_AS(parse("#include <stdio.h>\nint main()\n{\n    return 0;\n}\n"), ParseError);
  CHECK_THROWS_AS(parse("int f()\n{\n    return 0;\n}\n"), MissingMain);
  CHECK_THROWS_AS(parse("int main()\n{\n    return y;\n}\n"), ParseError);
  CHECK_THROWS_AS(parse("int main()\n{\n    int x = 1\n    return x;\n}\n"), ParseError);
  CHECK_THROWS_AS(parse("int main(int a)\n{\n    return a;\n}\n"), ParseError);
  try {
    parse("int main()\n{\n    return y;\n}\n");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("functions may be called before their definition") {
  CHECK_NOTHROW(parse("int main()\n{\n    return g();\n}\n\nint g()\n{\n    return 1;\n}\n"));
}

TEST_CASE("normalization braces bodies and splits statements") {
  auto out = normalize_source("int main(){int a=1;if(a>0)a=2;else if(a<0)a=3;else a=4;while(a)a--;return a;}");
  CHECK(out ==
        "int main()\n{\n    int a = 1;\n    if (a > 0) {\n        a = 2;\n    }\n    else if (a < 0) {\n"
        "        a = 3;\n    }\n    else {\n        a = 4;\n    }\n    while (a) {\n        a--;\n    }\n"
        "    return a;\n}\n");
  CHECK(normalize_source(out) == out);
}

TEST_CASE("normalization keeps only the parentheses precedence needs") {
  auto out = normalize_source("int main(){int a=((1+2))*3-(4-5);int b=-(-a);int*p=&a;return (*p)+(a%(2));}");
  CHECK(out ==
        "int main()\n{\n    int a = (1 + 2) * 3 - (4 - 5);\n    int b = -(-a);\n    int *p = &a;\n"
        "    return *p + a % 2;\n}\n");
}

TEST_CASE("switch arms are indented under their labels") {
  auto out = normalize_source("int main(){int a=read_int();switch(a){case 1:a=2;break;default:a=3;}return a;}");
  CHECK(out ==
        "int main()\n{\n    int a = read_int();\n    switch (a) {\n        case 1:\n            a = 2;\n"
        "            break;\n        default:\n            a = 3;\n    }\n    return a;\n}\n");
}
