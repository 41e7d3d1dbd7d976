window.vendor = { version: 1 };
