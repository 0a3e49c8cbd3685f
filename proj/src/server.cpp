#include "swarmgame/server.hpp"

#include <deque>
#include <iostream>
#include <thread>

#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/signal_set.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

namespace swarmgame {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

ServerCore::ServerCore(GameConfig cfg, std::array<bool, 2> bot_seats) : cfg_(std::move(cfg)), bots_(bot_seats) {}

std::optional<Role> ServerCore::role(SessionId id) const {
  auto it = roles_.find(id);
  if (it == roles_.end()) return std::nullopt;
  return it->second;
}

ServerAction ServerCore::handle_message(SessionId id, std::string_view text) {
  ServerAction act;
  ClientMessage msg;
  try {
    msg = parse_client_message(text);
  } catch (const ProtocolError& e) {
    act.replies.push_back(error_message(e.what()).dump());
    return act;
  }

  if (const auto* join = std::get_if<JoinRequest>(&msg)) {
    if (roles_.count(id)) {
      act.replies.push_back(rejected_message("already_joined").dump());
      return act;
    }
    if (join->role != Role::Spectator) {
      const Team t = join->role == Role::PlayerRed ? Team::Red : Team::Blue;
      if (seat_taken(t)) {
        act.replies.push_back(rejected_message("team_taken").dump());
        return act;
      }
      seats_[index(t)] = id;
    }
    roles_[id] = join->role;
    act.replies.push_back(joined_message(join->role, cfg_).dump());
    return act;
  }

  auto r = role(id);
  if (!r || *r == Role::Spectator) {
    act.replies.push_back(error_message("not_a_player").dump());
    return act;
  }
  act.command.emplace(*r == Role::PlayerRed ? Team::Red : Team::Blue, std::get<Command>(std::move(msg)));
  return act;
}

void ServerCore::disconnect(SessionId id) {
  roles_.erase(id);
  for (auto& s : seats_)
    if (s == id) s.reset();
}

void CommandMailbox::post(Team t, Command c) {
  std::lock_guard lk(mu_);
  slots_[index(t)] = std::move(c);
}

std::array<std::optional<Command>, 2> CommandMailbox::take() {
  std::lock_guard lk(mu_);
  auto out = std::move(slots_);
  slots_ = {};
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct Frame {
  std::shared_ptr<const std::string> text;
  bool droppable = false;  // state snapshots may be dropped, events may not
};

}  // namespace

struct GameServer::Impl {
  class Session;

  GameConfig cfg;
  ServerOptions opt;
  net::io_context ioc{1};
  tcp::acceptor acceptor{ioc};
  net::signal_set signals{ioc, SIGINT, SIGTERM};

  // I/O thread only
  ServerCore core;
  std::map<SessionId, std::shared_ptr<Session>> sessions;
  SessionId next_id = 1;

  // shared
  CommandMailbox mailbox;
  std::atomic<bool> seated{false};
  std::atomic<bool> stopping{false};
  std::atomic<std::uint64_t> dropped{0};
  mutable std::mutex stats_mu;
  TickStats tick_stats;

  // engine thread only
  Match match;
  std::array<std::optional<BotPolicy>, 2> bots;

  Impl(const GameConfig& c, ServerOptions o, MatchLogs logs, std::array<std::optional<BotPolicy>, 2> b)
      : cfg(c), opt(std::move(o)), core(c, {b[0].has_value(), b[1].has_value()}), match(c, logs), bots(std::move(b)) {
    seated = core.seat_taken(Team::Red) && core.seat_taken(Team::Blue);
  }

  void listen() {
    beast::error_code ec;
    const auto addr = net::ip::make_address(opt.address, ec);
    if (ec) throw ServerError("bad listen address '" + opt.address + "': " + ec.message());
    const tcp::endpoint ep{addr, opt.port};
    const std::string where = opt.address + ":" + std::to_string(opt.port);
    acceptor.open(ep.protocol(), ec);
    if (!ec) acceptor.set_option(net::socket_base::reuse_address(true), ec);
    if (!ec) acceptor.bind(ep, ec);
    if (!ec) acceptor.listen(net::socket_base::max_listen_connections, ec);
    if (ec) throw ServerError("cannot listen on " + where + ": " + ec.message());
  }

  void accept();
  void on_message(SessionId id, const std::string& text);
  void drop(SessionId id);
  void broadcast(std::vector<Frame> frames);
  void engine_loop();
  void record_tick(double step_ms, double late_ms);
};

class GameServer::Impl::Session : public std::enable_shared_from_this<Session> {
 public:
  Session(Impl& srv, SessionId id, tcp::socket sock) : srv_(srv), id_(id), stream_(std::move(sock)) {}

  void start() {
    stream_.expires_after(std::chrono::seconds(10));
    http::async_read(stream_, buf_, req_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      self->on_request(ec);
    });
  }

  void send(Frame f) {
    if (closed_) return;
    // the front frame may be in flight; never touch it while writing
    const std::size_t first = writing_ ? 1 : 0;
    if (out_.size() >= srv_.opt.client_queue && out_.size() > first) {
      auto victim = out_.begin() + static_cast<long>(first);
      for (auto it = victim; it != out_.end(); ++it) {
        if (it->droppable) {
          victim = it;
          break;
        }
      }
      out_.erase(victim);
      ++srv_.dropped;
    }
    out_.push_back(std::move(f));
    if (!writing_ && ws_) write_next();
  }

  void close() {
    closed_ = true;
    if (ws_) {
      // a close frame is a write too; wait for the one in flight
      if (!writing_) send_close();
    } else {
      beast::error_code ec;
      stream_.socket().shutdown(tcp::socket::shutdown_both, ec);
    }
  }

 private:
  void send_close() {
    ws_->async_close(websocket::close_code::going_away, [self = shared_from_this()](beast::error_code) {});
  }

  void on_request(beast::error_code ec) {
    if (ec) return srv_.drop(id_);
    if (!websocket::is_upgrade(req_) || req_.target() != "/game") {
      auto res = std::make_shared<http::response<http::string_body>>(http::status::not_found, req_.version());
      res->set(http::field::content_type, "text/plain");
      res->body() = "websocket endpoint is /game\n";
      res->prepare_payload();
      http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code, std::size_t) {
        beast::error_code ignored;
        self->stream_.socket().shutdown(tcp::socket::shutdown_both, ignored);
        self->srv_.drop(self->id_);
      });
      return;
    }
    stream_.expires_never();
    ws_.emplace(std::move(stream_));
    ws_->set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_->text(true);
    ws_->async_accept(req_, [self = shared_from_this()](beast::error_code ec) {
      if (ec) return self->srv_.drop(self->id_);
      self->read();
      if (!self->out_.empty() && !self->writing_) self->write_next();
    });
  }

  void read() {
    ws_->async_read(in_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return self->srv_.drop(self->id_);
      const std::string text = beast::buffers_to_string(self->in_.data());
      self->in_.consume(self->in_.size());
      self->srv_.on_message(self->id_, text);
      if (!self->closed_) self->read();
    });
  }

  void write_next() {
    writing_ = true;
    ws_->async_write(net::buffer(*out_.front().text), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      self->out_.pop_front();
      self->writing_ = false;
      if (ec) return self->srv_.drop(self->id_);
      if (self->closed_) return self->send_close();
      if (!self->out_.empty()) self->write_next();
    });
  }

  Impl& srv_;
  SessionId id_;
  beast::tcp_stream stream_;
  std::optional<websocket::stream<beast::tcp_stream>> ws_;
  beast::flat_buffer buf_, in_;
  http::request<http::string_body> req_;
  std::deque<Frame> out_;
  bool writing_ = false;
  bool closed_ = false;
};

void GameServer::Impl::accept() {
  acceptor.async_accept([this](beast::error_code ec, tcp::socket sock) {
    if (ec) {
      if (ec == net::error::operation_aborted) return;
    } else {
      const SessionId id = next_id++;
      auto s = std::make_shared<Session>(*this, id, std::move(sock));
      sessions[id] = s;
      s->start();
    }
    accept();
  });
}

void GameServer::Impl::on_message(SessionId id, const std::string& text) {
  ServerAction act = core.handle_message(id, text);
  auto it = sessions.find(id);
  if (it != sessions.end()) {
    for (auto& r : act.replies) it->second->send({std::make_shared<const std::string>(std::move(r)), false});
  }
  if (act.command) mailbox.post(act.command->first, std::move(act.command->second));
  if (core.seat_taken(Team::Red) && core.seat_taken(Team::Blue)) seated = true;
}

void GameServer::Impl::drop(SessionId id) {
  core.disconnect(id);
  sessions.erase(id);
}

void GameServer::Impl::broadcast(std::vector<Frame> frames) {
  for (auto& [id, s] : sessions) {
    if (!core.role(id)) continue;  // not joined yet
    for (const Frame& f : frames) s->send(f);
  }
}

void GameServer::Impl::record_tick(double step_ms, double late_ms) {
  std::lock_guard lk(stats_mu);
  ++tick_stats.ticks;
  tick_stats.max_step_ms = std::max(tick_stats.max_step_ms, step_ms);
  tick_stats.max_lateness_ms = std::max(tick_stats.max_lateness_ms, late_ms);
}

void GameServer::Impl::engine_loop() {
  using clock = std::chrono::steady_clock;
  const auto period = std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(cfg.dynamics.dt_engine));
  auto next = clock::now();
  while (!stopping) {
    const GameState& st = match.game().state();
    if (st.over() || (opt.max_ticks > 0 && st.tick >= opt.max_ticks)) break;
    if (opt.start_when_seated && !seated) {
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
      next = clock::now();
      continue;
    }
    std::this_thread::sleep_until(next);
    const auto woke = clock::now();

    auto cmds = mailbox.take();
    for (auto& b : bots) {
      if (!b) continue;
      for (Command& c : bot_step(*b, st)) match.submit(b->team, std::move(c));
    }
    for (Team t : kTeams)
      if (cmds[index(t)]) match.submit(t, std::move(*cmds[index(t)]));

    std::vector<Frame> frames;
    try {
      const auto events = match.step();
      frames.push_back({std::make_shared<const std::string>(state_message(match.game().state(), cfg.engine).dump()), true});
      for (const GameEvent& e : events) frames.push_back({std::make_shared<const std::string>(event_to_json(e).dump()), false});
    } catch (const std::exception& e) {
      std::cerr << "engine: " << e.what() << "\n";
      break;
    }
    net::post(ioc, [this, f = std::move(frames)]() mutable { broadcast(std::move(f)); });

    const auto done = clock::now();
    record_tick(std::chrono::duration<double, std::milli>(done - woke).count(),
                std::chrono::duration<double, std::milli>(woke - next).count());
    next += period;
    if (done - next > 10 * period) next = done;  // badly behind: don't try to catch up
  }
  match.finish();
  if (!stopping) std::this_thread::sleep_for(opt.linger);
  net::post(ioc, [this] {
    beast::error_code ec;
    acceptor.close(ec);
    signals.cancel(ec);
    for (auto& [id, s] : sessions) s->close();
    // give close frames a moment, then stop regardless
    auto t = std::make_shared<net::steady_timer>(ioc, std::chrono::milliseconds(100));
    t->async_wait([this, t](beast::error_code) { ioc.stop(); });
  });
}

GameServer::GameServer(const GameConfig& cfg, ServerOptions opt, MatchLogs logs,
                       std::array<std::optional<BotPolicy>, 2> bots)
    : impl_(std::make_unique<Impl>(cfg, std::move(opt), logs, std::move(bots))) {
  impl_->listen();
}

GameServer::~GameServer() = default;

std::uint16_t GameServer::port() const { return impl_->acceptor.local_endpoint().port(); }

void GameServer::stop() { impl_->stopping = true; }

TickStats GameServer::stats() const {
  std::lock_guard lk(impl_->stats_mu);
  TickStats s = impl_->tick_stats;
  s.dropped_frames = impl_->dropped;
  return s;
}

RunSummary GameServer::run() {
  Impl& m = *impl_;
  m.signals.async_wait([&m](beast::error_code ec, int) {
    if (!ec) m.stopping = true;
  });
  m.accept();
  std::thread engine([&m] { m.engine_loop(); });
  m.ioc.run();
  engine.join();
  RunSummary s;
  s.ticks = m.match.game().state().tick;
  s.hash = m.match.game().state_hash();
  s.winner = m.match.game().state().winner;
  for (const GameEvent& e : m.match.game().state().events)
    if (e.kind == EventKind::Capture) ++s.captures;
  return s;
}

}  // namespace swarmgame
