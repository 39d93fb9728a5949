function setup(env) {
  createDebug.debug = createDebug;
  createDebug.humanize = require('ms');
  createDebug.formatters = {};

  function createDebug(namespace) {
    function debug() {}
    debug.namespace = namespace;
    return debug;
  }

  return createDebug;
}

module.exports = setup;
