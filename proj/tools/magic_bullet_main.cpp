#include <iostream>
#include <string>
#include <vector>

#include "magic_bullet/cli.hpp"
#include "magic_bullet/errors.hpp"

int main(int argc, char** argv) {
  namespace cli = magic_bullet::cli;
  const std::vector<std::string> args(argv + 1, argv + argc);
  try {
    const cli::RunConfig config = cli::parse_config(args);
    // Summaries go to stdout only when the primary output is a file.
    std::ostream& info = cli::resolve_output_path(config).empty() ? std::cerr : std::cout;
    return cli::run(config, std::cout, info);
  } catch (const cli::HelpRequested& h) {
    std::cout << h.text;
    return 0;
  } catch (const magic_bullet::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
