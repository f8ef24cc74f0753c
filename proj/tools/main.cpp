#include <exception>
#include <iostream>

#include "cds/cli.hpp"

int main(int argc, char** argv) {
  try {
    const auto config = cds::cli::parse_args({argv + 1, argv + argc});
    return cds::cli::run(config);
  } catch (const cds::cli::HelpRequested& help) {
    std::cout << help.text;
    return 0;
  } catch (const cds::cli::UsageError& e) {
    std::cerr << "cds: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "cds: " << e.what() << '\n';
    return 1;
  }
}
