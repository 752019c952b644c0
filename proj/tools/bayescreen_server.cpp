// HTTP front end. Every request is forwarded to api::handle.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "httplib.h"

#include "bayescreen/api.hpp"

int main(int argc, char** argv) {
    CLI::App app{"bayescreen JSON API server", "bayescreen_server"};
    std::string bind = "127.0.0.1";
    int port = 8080;
    app.add_option("--bind", bind, "address to listen on");
    app.add_option("--port", port, "port to listen on")->check(CLI::Range(1, 65535));
    CLI11_PARSE(app, argc, argv);

    httplib::Server server;
    auto forward = [](const httplib::Request& req, httplib::Response& res) {
        const bayescreen::api::Response r = bayescreen::api::handle(req.method, req.path, req.body);
        res.status = r.status;
        res.set_content(r.body, "application/json");
    };
    server.Get(".*", forward);
    server.Post(".*", forward);
    server.Put(".*", forward);
    server.Delete(".*", forward);

    std::cerr << "listening on " << bind << ':' << port << '\n';
    if (!server.listen(bind, port)) {
        std::cerr << "error: cannot listen on " << bind << ':' << port << '\n';
        return 1;
    }
    return 0;
}
