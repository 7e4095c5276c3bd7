import logging

from message_log import MessageLog


def test_identical_messages_stack():
    log = MessageLog()
    log.add_message("Goal pruned.")
    log.add_message("Goal pruned.")
    log.add_message("Other.")
    log.add_message("Other.", stack=False)
    assert log.lines() == ["Goal pruned. (x2)", "Other.", "Other."]


def test_messages_reach_logging(caplog):
    log = MessageLog("engine")
    with caplog.at_level(logging.WARNING, logger="engine"):
        log.add_message("Quiet.", logging.DEBUG)
        log.add_message("Loud.", logging.WARNING)
    assert [record.getMessage() for record in caplog.records] == ["Loud."]
    assert log.lines() == ["Quiet.", "Loud."]

